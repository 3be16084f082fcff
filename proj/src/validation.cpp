#include "lingvar/validation.hpp"

#include "lingvar/error.hpp"
#include "lingvar/prompts.hpp"
#include "lingvar/spoken_parser.hpp"

namespace lingvar {

std::string_view to_string(ValidationMode m) {
  switch (m) {
    case ValidationMode::oracle: return "oracle";
    case ValidationMode::provider: return "provider";
    case ValidationMode::both: return "both";
  }
  return "oracle";
}

ValidationMode validation_mode_from_string(std::string_view s) {
  if (s == "oracle") return ValidationMode::oracle;
  if (s == "provider") return ValidationMode::provider;
  if (s == "both") return ValidationMode::both;
  throw Error(ErrorCode::invalid_config, "validation mode must be oracle, provider or both, got '" + std::string(s) + "'");
}

nlohmann::ordered_json to_json(const ValidationOutcome& o) {
  nlohmann::ordered_json j;
  j["valid"] = o.valid;
  j["extracted"] = o.extracted ? nlohmann::ordered_json(o.extracted->canonical) : nlohmann::ordered_json(nullptr);
  j["mode"] = to_string(o.mode);
  j["disagreement"] = o.disagreement;
  return j;
}

ValidationOutcome validate(std::string_view transcript, const EntityValue& truth, const FieldSpec& spec,
                           ValidationMode mode, ChatBackend* judge, const RetryPolicy& retry) {
  ValidationOutcome out;
  out.mode = mode;
  bool oracle = false;
  if (mode != ValidationMode::provider) {
    out.extracted = extract(spec, transcript);
    oracle = out.extracted && values_equivalent(spec.kind, out.extracted->canonical, truth.canonical);
    if (mode == ValidationMode::oracle) {
      out.valid = oracle;
      return out;
    }
  }
  if (!judge) throw Error(ErrorCode::usage_error, "provider validation needs a judge backend");
  bool verdict = false;
  try {
    verdict = std::get<BooleanVerdict>(chat(*judge, validation_request(spec, transcript, truth), retry)).value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::malformed_output) throw Error(ErrorCode::judge_malformed, e.what());
    throw;
  }
  if (mode == ValidationMode::provider) {
    out.valid = verdict;
  } else {
    out.disagreement = verdict != oracle;
    out.valid = verdict && oracle;
  }
  return out;
}

}  // namespace lingvar
