#pragma once

#include <iosfwd>

namespace lingvar {

// Exit codes: 0 ok, 1 usage, 2 provider failure, 3 data-format error.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lingvar
