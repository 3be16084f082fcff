#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lingvar/domain.hpp"
#include "lingvar/providers.hpp"
#include "lingvar/taxonomy.hpp"
#include "lingvar/validation.hpp"

namespace lingvar {

struct GenerationConfig {
  FieldSpec spec;
  std::size_t num_values = 5;
  std::size_t target_per_pair = 3;
  std::size_t max_rounds = 4;
  ProviderMode provider_mode = ProviderMode::mock;
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
  std::vector<std::string> variation_ids;  // empty: every id registered for the kind
  RetryPolicy retry;

  void validate() const;
};

using PairKey = std::pair<std::string, std::string>;  // (value canonical, variation id)

class CoverageLedger {
 public:
  CoverageLedger() = default;
  CoverageLedger(const std::vector<EntityValue>& values, const std::vector<std::string>& ids);

  bool in_domain(const PairKey& key) const { return counts_.count(key) > 0; }
  std::size_t count(const PairKey& key) const;
  void set(const PairKey& key, std::size_t n) { counts_[key] = n; }
  // Credits every in-domain tag of a sample once.
  void credit(const std::string& value, const std::set<std::string>& tags);
  const std::map<PairKey, std::size_t>& counts() const { return counts_; }

 private:
  std::map<PairKey, std::size_t> counts_;
};

struct PlanEntry {
  std::string value;
  std::string variation_id;
  std::size_t deficit = 0;
  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

// Pairs below target, by (deficit desc, value asc, id asc).
std::vector<PlanEntry> balance_plan(const CoverageLedger& ledger, std::size_t target);

// Throws Error(empty_result) when every returned value was malformed.
std::vector<EntityValue> generate_values(const FieldSpec& spec, std::size_t n, ChatBackend& provider,
                                         const RetryPolicy& retry = {});

struct GeneratedTranscript {
  std::string text;
  std::set<std::string> tags;
};

std::vector<GeneratedTranscript> generate_transcripts(const FieldSpec& spec, const EntityValue& value,
                                                      const std::vector<std::string>& variation_ids,
                                                      const std::vector<std::string>& existing, std::size_t count,
                                                      ChatBackend& provider, const RetryPolicy& retry = {},
                                                      const VariationRegistry& registry = VariationRegistry::builtin());

struct PipelineReport {
  std::size_t rounds_used = 0;
  std::size_t calls = 0;
  std::size_t generated = 0;  // transcripts returned by the provider
  std::size_t invalid = 0;
  std::size_t duplicates = 0;
  std::size_t over_target = 0;  // dropped by the target+1 retention clamp
  std::size_t provider_failures = 0;
  std::size_t malformed_outputs = 0;
  double invalid_rate = 0.0;
  std::vector<PlanEntry> shortfalls;
  std::map<PairKey, std::size_t> counts;

  nlohmann::ordered_json to_json() const;
};

struct PipelineResult {
  std::vector<LabeledSample> samples;
  PipelineReport report;
};

// Throws Error(provider_error) only when every call of the first round fails.
PipelineResult run_pipeline(const GenerationConfig& config, ChatBackend& provider, const Validator& validator,
                            const VariationRegistry& registry = VariationRegistry::builtin());

}  // namespace lingvar
