#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lingvar/domain.hpp"
#include "lingvar/evaluator.hpp"
#include "lingvar/prompts.hpp"
#include "lingvar/providers.hpp"

namespace lingvar {

struct PromptCandidate {
  std::size_t id = 0;  // creation order; the base is 0
  std::string instruction;
  std::optional<std::size_t> parent;
  std::size_t depth = 0;
  std::optional<double> train_score;  // latest mini-batch accuracy
  std::optional<double> valid_score;
  std::string valid_fingerprint;  // dataset the valid score was computed on
};

struct OptimizerConfig {
  std::size_t batch_size = 16;
  std::size_t iterations = 5;
  std::size_t pool_size = 4;
  std::size_t mutation_count = 3;
  std::uint64_t seed = 0;
  std::size_t max_failures = 10;
  std::size_t failure_byte_budget = 4096;
  std::size_t parallelism = 1;
};

// Returns the extracted value, or nothing when the instruction yields no value.
using Extractor = std::function<std::optional<std::string>(const std::string& instruction, const LabeledSample& sample)>;
// Returns up to count revised instructions; may throw Error(provider_error).
using Mutator = std::function<std::vector<std::string>(const std::string& instruction,
                                                       const std::vector<FailureCase>& failures, std::size_t count)>;

Extractor provider_extractor(ChatBackend& backend, const FieldSpec& spec, RetryPolicy retry = {});
Extractor oracle_extractor();
Mutator provider_mutator(ChatBackend& backend, const FieldSpec& spec, RetryPolicy retry = {});

std::string dataset_fingerprint(const std::vector<LabeledSample>& samples);

Metrics evaluate_prompt(const PromptCandidate& candidate, const std::vector<LabeledSample>& samples,
                        const Extractor& extractor, std::size_t parallelism = 1);

struct TraceRecord {
  std::size_t iteration = 0;
  std::size_t candidate = 0;
  std::string scope;  // "batch", "valid", "mutation_error"
  double score = 0.0;
  double running_best = 0.0;  // best valid score so far
  std::string note;

  nlohmann::ordered_json to_json() const;
};

struct OptimizeResult {
  PromptCandidate best;
  std::vector<PromptCandidate> candidates;  // every candidate ever created
  std::vector<TraceRecord> trace;
  std::vector<double> running_best;  // after each iteration, starting with the base
};

OptimizeResult optimize(const std::string& base_instruction, const std::vector<LabeledSample>& trainset,
                        const std::vector<LabeledSample>& validset, const Extractor& extractor, const Mutator& mutator,
                        const OptimizerConfig& config);

}  // namespace lingvar
