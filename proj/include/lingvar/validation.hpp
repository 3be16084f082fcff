#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lingvar/domain.hpp"
#include "lingvar/providers.hpp"

namespace lingvar {

enum class ValidationMode { oracle, provider, both };

std::string_view to_string(ValidationMode m);
ValidationMode validation_mode_from_string(std::string_view s);

struct ValidationOutcome {
  bool valid = false;
  std::optional<EntityValue> extracted;  // oracle extraction, when the oracle ran
  ValidationMode mode = ValidationMode::oracle;
  bool disagreement = false;  // both mode only
};

nlohmann::ordered_json to_json(const ValidationOutcome& o);

// Provider and both modes need a judge backend. Throws Error(judge_malformed)
// when the judge answers neither true nor false after retries.
ValidationOutcome validate(std::string_view transcript, const EntityValue& truth, const FieldSpec& spec,
                           ValidationMode mode, ChatBackend* judge = nullptr, const RetryPolicy& retry = {});

class Validator {
 public:
  explicit Validator(FieldSpec spec, ValidationMode mode = ValidationMode::oracle, ChatBackend* judge = nullptr,
                     RetryPolicy retry = {})
      : spec_(std::move(spec)), mode_(mode), judge_(judge), retry_(retry) {}

  ValidationOutcome operator()(std::string_view transcript, const EntityValue& truth) const {
    return validate(transcript, truth, spec_, mode_, judge_, retry_);
  }
  ValidationMode mode() const { return mode_; }

 private:
  FieldSpec spec_;
  ValidationMode mode_;
  ChatBackend* judge_;
  RetryPolicy retry_;
};

}  // namespace lingvar
