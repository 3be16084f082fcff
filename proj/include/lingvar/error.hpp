#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace lingvar {

enum class ErrorCode {
  format_error,
  unknown_kind,
  provider_error,
  malformed_output,
  unsupported_combination,
  usage_error,
  invalid_ratios,
  dimension_mismatch,
  zero_vector,
  judge_malformed,
  empty_result,
  invalid_config,
  io_error,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the renderer when two requested variations cannot be realized together.
class UnsupportedCombination : public Error {
 public:
  UnsupportedCombination(std::string first, std::string second)
      : Error(ErrorCode::unsupported_combination, first + " + " + second),
        first_(std::move(first)),
        second_(std::move(second)) {}

  const std::string& first() const noexcept { return first_; }
  const std::string& second() const noexcept { return second_; }

 private:
  std::string first_;
  std::string second_;
};

}  // namespace lingvar
