#include "lingvar/generation.hpp"

#include <algorithm>
#include <future>

#include <spdlog/spdlog.h>

#include "lingvar/error.hpp"
#include "lingvar/prompts.hpp"
#include "lingvar/text.hpp"

namespace lingvar {

void GenerationConfig::validate() const {
  spec.validate();
  if (num_values < 1) throw Error(ErrorCode::invalid_config, "num_values must be at least 1");
  if (target_per_pair < 1) throw Error(ErrorCode::invalid_config, "target_per_pair must be at least 1");
  if (max_rounds < 1) throw Error(ErrorCode::invalid_config, "max_rounds must be at least 1");
  if (parallelism < 1) throw Error(ErrorCode::invalid_config, "parallelism must be at least 1");
}

CoverageLedger::CoverageLedger(const std::vector<EntityValue>& values, const std::vector<std::string>& ids) {
  for (const auto& v : values) {
    for (const auto& id : ids) counts_[{v.canonical, id}] = 0;
  }
}

std::size_t CoverageLedger::count(const PairKey& key) const {
  auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

void CoverageLedger::credit(const std::string& value, const std::set<std::string>& tags) {
  for (const auto& t : tags) {
    auto it = counts_.find({value, t});
    if (it != counts_.end()) ++it->second;
  }
}

std::vector<PlanEntry> balance_plan(const CoverageLedger& ledger, std::size_t target) {
  std::vector<PlanEntry> plan;
  for (const auto& [key, n] : ledger.counts()) {
    if (n < target) plan.push_back({key.first, key.second, target - n});
  }
  std::stable_sort(plan.begin(), plan.end(), [](const PlanEntry& a, const PlanEntry& b) {
    if (a.deficit != b.deficit) return a.deficit > b.deficit;
    if (a.value != b.value) return a.value < b.value;
    return a.variation_id < b.variation_id;
  });
  return plan;
}

std::vector<EntityValue> generate_values(const FieldSpec& spec, std::size_t n, ChatBackend& provider,
                                         const RetryPolicy& retry) {
  if (n < 1) throw Error(ErrorCode::usage_error, "generate_values needs n >= 1");
  auto payload = chat_as<ValuesPayload>(provider, value_generation_request(spec, n), retry);
  std::vector<EntityValue> out;
  std::set<std::string> seen;
  for (const auto& raw : payload.values) {
    if (out.size() == n) break;
    try {
      EntityValue v = EntityValue::from_raw(spec.kind, raw);
      if (seen.insert(v.canonical).second) out.push_back(std::move(v));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::format_error) throw;
      spdlog::warn("dropping malformed {} value '{}'", spec.kind.tag(), raw);
    }
  }
  if (out.empty()) throw Error(ErrorCode::empty_result, "no well-formed " + spec.kind.tag() + " values returned");
  return out;
}

std::vector<GeneratedTranscript> generate_transcripts(const FieldSpec& spec, const EntityValue& value,
                                                      const std::vector<std::string>& variation_ids,
                                                      const std::vector<std::string>& existing, std::size_t count,
                                                      ChatBackend& provider, const RetryPolicy& retry,
                                                      const VariationRegistry& registry) {
  auto entries = registry.for_kind(spec.kind);
  auto known = [&](const std::string& id) {
    return std::any_of(entries.begin(), entries.end(), [&](const VariationType& e) { return e.id == id; });
  };
  std::vector<VariationType> chosen;
  for (const auto& id : variation_ids) {
    if (!known(id)) throw Error(ErrorCode::usage_error, "variation '" + id + "' is not registered for " + spec.kind.tag());
    chosen.push_back(*registry.find(id));
  }
  auto payload =
      chat_as<TranscriptsPayload>(provider, transcript_generation_request(spec, value, chosen, existing, count), retry);
  std::set<std::string> seen(existing.begin(), existing.end());
  std::vector<GeneratedTranscript> out;
  for (auto& d : payload.transcripts) {
    if (text::trim(d.text).empty() || !seen.insert(d.text).second) continue;
    GeneratedTranscript t{d.text, {}};
    for (const auto& tag : d.variation_types) t.tags.insert(known(tag) ? tag : std::string(kNotListed));
    if (t.tags.size() > 1) t.tags.erase(std::string(kNotListed));
    if (t.tags.empty()) t.tags.insert(std::string(kNotListed));
    out.push_back(std::move(t));
  }
  return out;
}

nlohmann::ordered_json PipelineReport::to_json() const {
  nlohmann::ordered_json j;
  j["rounds_used"] = rounds_used;
  j["calls"] = calls;
  j["generated"] = generated;
  j["invalid"] = invalid;
  j["invalid_rate"] = invalid_rate;
  j["duplicates"] = duplicates;
  j["over_target"] = over_target;
  j["provider_failures"] = provider_failures;
  j["malformed_outputs"] = malformed_outputs;
  auto shorts = nlohmann::ordered_json::array();
  for (const auto& s : shortfalls) {
    shorts.push_back({{"value", s.value}, {"variation_id", s.variation_id}, {"deficit", s.deficit}});
  }
  j["shortfalls"] = shorts;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& [k, n] : counts) pairs.push_back({{"value", k.first}, {"variation_id", k.second}, {"count", n}});
  j["counts"] = pairs;
  return j;
}

namespace {

struct CallResult {
  std::vector<GeneratedTranscript> transcripts;
  std::optional<ErrorCode> error;
};

}  // namespace

PipelineResult run_pipeline(const GenerationConfig& config, ChatBackend& provider, const Validator& validator,
                            const VariationRegistry& registry) {
  config.validate();
  const FieldSpec& spec = config.spec;
  std::vector<std::string> ids = config.variation_ids.empty() ? registry.ids_for(spec.kind) : config.variation_ids;
  std::vector<EntityValue> values = generate_values(spec, config.num_values, provider, config.retry);

  std::map<std::string, EntityValue> by_canonical;
  for (const auto& v : values) by_canonical.emplace(v.canonical, v);
  CoverageLedger ledger(values, ids);
  std::map<std::string, std::vector<std::string>> texts;  // per value, emission order

  PipelineResult result;
  PipelineReport& report = result.report;
  const std::size_t cap = config.target_per_pair + 1;

  for (std::size_t round = 1; round <= config.max_rounds; ++round) {
    auto plan = balance_plan(ledger, config.target_per_pair);
    if (plan.empty()) break;
    report.rounds_used = round;

    std::vector<CallResult> results(plan.size());
    auto call = [&](std::size_t i) {
      const PlanEntry& e = plan[i];
      CallResult r;
      try {
        r.transcripts = generate_transcripts(spec, by_canonical.at(e.value), {e.variation_id}, texts.at(e.value),
                                             e.deficit, provider, config.retry, registry);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::provider_error && err.code() != ErrorCode::malformed_output) throw;
        r.error = err.code();
      }
      return r;
    };
    // texts[] is only read during a round; make sure every key exists before fanning out.
    for (const auto& e : plan) texts[e.value];
    for (std::size_t start = 0; start < plan.size(); start += config.parallelism) {
      std::size_t end = std::min(plan.size(), start + config.parallelism);
      if (end - start == 1) {
        results[start] = call(start);
        continue;
      }
      std::vector<std::future<CallResult>> futures;
      for (std::size_t i = start; i < end; ++i) futures.push_back(std::async(std::launch::async, call, i));
      for (std::size_t i = start; i < end; ++i) results[i] = futures[i - start].get();
    }

    std::size_t failed = 0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
      ++report.calls;
      const CallResult& r = results[i];
      if (r.error) {
        ++failed;
        if (*r.error == ErrorCode::provider_error) {
          ++report.provider_failures;
        } else {
          ++report.malformed_outputs;
        }
        continue;
      }
      const EntityValue& value = by_canonical.at(plan[i].value);
      auto& seen = texts[value.canonical];
      for (const auto& t : r.transcripts) {
        ++report.generated;
        if (std::find(seen.begin(), seen.end(), t.text) != seen.end()) {
          ++report.duplicates;
          continue;
        }
        if (!validator(t.text, value).valid) {
          ++report.invalid;
          continue;
        }
        bool full = std::any_of(t.tags.begin(), t.tags.end(), [&](const std::string& tag) {
          PairKey k{value.canonical, tag};
          return ledger.in_domain(k) && ledger.count(k) >= cap;
        });
        if (full) {
          ++report.over_target;
          continue;
        }
        seen.push_back(t.text);
        ledger.credit(value.canonical, t.tags);
        LabeledSample s;
        s.transcript = Transcript{t.text, t.tags, value, Provenance::synthetic};
        s.validated = true;
        result.samples.push_back(std::move(s));
      }
    }
    if (round == 1 && failed == plan.size() && report.provider_failures == failed) {
      throw Error(ErrorCode::provider_error, "every generation call failed in the first round");
    }
  }

  report.invalid_rate =
      report.generated == 0 ? 0.0 : static_cast<double>(report.invalid) / static_cast<double>(report.generated);
  report.shortfalls = balance_plan(ledger, config.target_per_pair);
  report.counts = ledger.counts();
  return result;
}

}  // namespace lingvar
