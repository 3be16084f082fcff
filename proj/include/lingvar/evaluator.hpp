#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lingvar/domain.hpp"

namespace lingvar {

struct Metrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;  // tp / (tp + fp + fn)

  static Metrics from_counts(std::size_t tp, std::size_t fp, std::size_t fn);
  std::size_t total() const { return tp + fp + fn; }
  nlohmann::ordered_json to_json() const;
};

struct Prediction {
  std::optional<std::string> predicted;  // empty string counts as missing
  EntityValue gold;
};

Metrics score(const std::vector<Prediction>& predictions);

struct SplitRatios {
  double train = 0.7;
  double valid = 0.15;
  double test = 0.15;
};

// Valid and test get floor(ratio * n), train takes the remainder.
// Throws Error(invalid_ratios) unless every ratio is positive and they sum to 1.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios);

// Returns the samples in input order with split assigned. Stratified by value.
std::vector<LabeledSample> split(std::vector<LabeledSample> samples, const SplitRatios& ratios, std::uint64_t seed);

struct DatasetStats {
  std::size_t num_samples = 0;
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;
  std::size_t unassigned = 0;
  std::size_t num_tags_used = 0;
  std::size_t tag_occurrences = 0;
  std::size_t num_unique_values = 0;
  double avg_len_chars = 0.0;  // Unicode code points
  double std_len_chars = 0.0;  // population standard deviation
  std::map<std::string, std::size_t> tag_counts;

  nlohmann::ordered_json to_json() const;
};

DatasetStats dataset_stats(const std::vector<LabeledSample>& samples);

// Aligned text tables: one row per label.
std::string format_metrics_table(const std::map<std::string, Metrics>& rows);
std::string format_stats_table(const std::map<std::string, DatasetStats>& rows);

}  // namespace lingvar
