#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lingvar/domain.hpp"
#include "lingvar/lexicon.hpp"

namespace lingvar {

enum class TokenClass { digit_word, number_word, ordinal, month, filler, correction_marker, name_token, other };

std::string_view to_string(TokenClass c);

struct Token {
  std::string surface;
  std::string norm;  // lowercase surface
  TokenClass cls = TokenClass::other;
  lexicon::NumberRole role = lexicon::NumberRole::none;
  int value = -1;  // digit/number/ordinal value, month number
  bool punct = false;
  bool ellipsis = false;
  bool glued = false;       // split out of a run-together word
  bool hyphen_part = false; // non-first part of a hyphen-joined word
  bool spelled = false;     // letter-by-letter spelling such as J-O-H-N
  bool title = false;
  bool suffix = false;
  bool initial = false;
  std::size_t word = 0;     // index of the whitespace word it came from
};

struct TokenStream {
  std::vector<Token> tokens;
};

// Switches for individual interpretation rules; all on by default.
struct ParseOptions {
  bool resolve_corrections = true;
  bool collapse_repetitions = true;
  bool honor_reversal_cues = true;
  bool oh_as_zero = true;
  bool expand_multipliers = true;
  bool map_nicknames = true;
  int reference_year = 0;  // 0 means the current year
};

// Total: every input (including invalid UTF-8) yields a stream.
TokenStream tokenize(std::string_view text, const ParseOptions& options = {});

// Applies self-corrections and collapses repeated comma groups. Idempotent.
TokenStream resolve_corrections(const TokenStream& stream, const ParseOptions& options = {});

// Digit string spoken in the stream, after corrections are applied.
std::string parse_number_words(std::string_view text, const ParseOptions& options = {});
std::string assemble_digits(const TokenStream& resolved, const ParseOptions& options = {});

// Given-name heuristic shared by extraction and name canonicalization.
std::optional<std::string> find_given_name(std::string_view text, const ParseOptions& options = {});

// Deterministic oracle extraction; never throws for builtin kinds.
std::optional<EntityValue> extract(const FieldSpec& spec, std::string_view text, const ParseOptions& options = {});
std::optional<EntityValue> extract(const EntityKind& kind, std::string_view text, const ParseOptions& options = {});

}  // namespace lingvar
