#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lingvar/domain.hpp"
#include "lingvar/providers.hpp"
#include "lingvar/taxonomy.hpp"

namespace lingvar {

// Throws Error(dimension_mismatch) or Error(zero_vector).
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

enum class OverlapCategory { match, superset, subset, null_overlap, partial_overlap };

std::string_view to_string(OverlapCategory c);
OverlapCategory overlap_category_from_string(std::string_view s);

// real_tags must be non-empty (usage_error otherwise).
OverlapCategory overlap_category(const std::set<std::string>& real_tags, const std::set<std::string>& synth_tags);

struct SimilarityConfig {
  std::uint64_t seed = 0;
  std::vector<OverlapCategory> targets = {OverlapCategory::match, OverlapCategory::superset, OverlapCategory::subset,
                                          OverlapCategory::null_overlap};
  ClassifyMode classify_mode = ClassifyMode::rule;
  RetryPolicy retry;
};

struct ScoredPair {
  std::size_t sample_index = 0;
  std::string kind;
  std::string real_text;
  std::string synth_text;
  std::set<std::string> real_tags;
  std::set<std::string> synth_tags;
  OverlapCategory category = OverlapCategory::match;
  double cosine = 0.0;
};

struct BucketStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
};

BucketStats bucket_stats(const std::vector<double>& values);

struct SimilarityReport {
  std::vector<ScoredPair> pairs;
  std::map<std::string, std::map<OverlapCategory, BucketStats>> buckets;  // kind -> category -> stats
  std::size_t skipped_samples = 0;   // provider failures
  std::size_t replan_failures = 0;   // target categories the renderer could not realize

  nlohmann::ordered_json to_json() const;
  std::string table() const;
};

// Synthetic counterparts come from chat (generate_transcripts) when given,
// otherwise straight from the renderer.
SimilarityReport pair_and_score(const std::vector<LabeledSample>& real, EmbeddingBackend& embedder, ChatBackend* chat,
                                const SimilarityConfig& config,
                                const VariationRegistry& registry = VariationRegistry::builtin());

}  // namespace lingvar
