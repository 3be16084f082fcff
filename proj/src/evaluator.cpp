#include "lingvar/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "lingvar/error.hpp"
#include "lingvar/rng.hpp"
#include "lingvar/text.hpp"

namespace lingvar {

Metrics Metrics::from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  const double t = static_cast<double>(tp);
  m.precision = tp + fp == 0 ? 0.0 : t / static_cast<double>(tp + fp);
  m.recall = tp + fn == 0 ? 0.0 : t / static_cast<double>(tp + fn);
  m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  m.accuracy = m.total() == 0 ? 0.0 : t / static_cast<double>(m.total());
  return m;
}

nlohmann::ordered_json Metrics::to_json() const {
  return {{"tp", tp},       {"fp", fp}, {"fn", fn}, {"precision", precision}, {"recall", recall},
          {"f1", f1},       {"accuracy", accuracy}};
}

Metrics score(const std::vector<Prediction>& predictions) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& p : predictions) {
    if (!p.predicted || text::trim(*p.predicted).empty()) {
      ++fn;
    } else if (values_equivalent(p.gold.kind, *p.predicted, p.gold.canonical)) {
      ++tp;
    } else {
      ++fp;
    }
  }
  return Metrics::from_counts(tp, fp, fn);
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& r) {
  if (!(r.train > 0 && r.valid > 0 && r.test > 0) || std::fabs(r.train + r.valid + r.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::invalid_ratios,
                fmt::format("ratios must be positive and sum to 1, got {},{},{}", r.train, r.valid, r.test));
  }
  const double dn = static_cast<double>(n);
  auto valid = static_cast<std::size_t>(std::floor(r.valid * dn + 1e-9));
  auto test = static_cast<std::size_t>(std::floor(r.test * dn + 1e-9));
  return {n - valid - test, valid, test};
}

std::vector<LabeledSample> split(std::vector<LabeledSample> samples, const SplitRatios& ratios, std::uint64_t seed) {
  auto sizes = split_sizes(samples.size(), ratios);
  Rng rng(derive_seed(seed, "split"));

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& v = samples[i].transcript.value;
    groups[v.kind.tag() + "\x1f" + v.canonical].push_back(i);
  }
  std::vector<std::vector<std::size_t>> order;
  for (auto& [key, idx] : groups) {
    rng.shuffle(idx);
    order.push_back(idx);
  }
  rng.shuffle(order);

  std::array<std::size_t, 3> left = sizes;
  std::vector<int> label(samples.size(), -1);
  for (const auto& g : order) {
    if (left[0] == 0) break;
    label[g.front()] = 0;
    --left[0];
  }
  std::vector<std::size_t> rest;
  for (const auto& g : order) {
    for (std::size_t i : g) {
      if (label[i] < 0) rest.push_back(i);
    }
  }
  const double m = static_cast<double>(rest.size());
  std::array<std::size_t, 3> given{0, 0, 0};
  for (std::size_t k = 0; k < rest.size(); ++k) {
    int best = -1;
    double best_gap = 0.0;
    for (int s = 0; s < 3; ++s) {
      if (given[s] >= left[s]) continue;
      double gap = static_cast<double>(left[s]) * static_cast<double>(k + 1) / m - static_cast<double>(given[s]);
      if (best < 0 || gap > best_gap + 1e-12) {
        best = s;
        best_gap = gap;
      }
    }
    label[rest[k]] = best;
    ++given[static_cast<std::size_t>(best)];
  }
  static const std::array<Split, 3> names = {Split::train, Split::valid, Split::test};
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i].split = names[static_cast<std::size_t>(label[i])];
  return samples;
}

nlohmann::ordered_json DatasetStats::to_json() const {
  nlohmann::ordered_json j;
  j["num_samples"] = num_samples;
  j["split_counts"] = {{"train", train}, {"valid", valid}, {"test", test}, {"unassigned", unassigned}};
  j["num_tags_used"] = num_tags_used;
  j["tag_occurrences"] = tag_occurrences;
  j["num_unique_values"] = num_unique_values;
  j["avg_len_chars"] = avg_len_chars;
  j["std_len_chars"] = std_len_chars;
  j["tag_counts"] = tag_counts;
  return j;
}

DatasetStats dataset_stats(const std::vector<LabeledSample>& samples) {
  DatasetStats s;
  s.num_samples = samples.size();
  std::set<std::string> values;
  double sum = 0.0;
  std::vector<double> lens;
  for (const auto& x : samples) {
    if (!x.split) {
      ++s.unassigned;
    } else if (*x.split == Split::train) {
      ++s.train;
    } else if (*x.split == Split::valid) {
      ++s.valid;
    } else {
      ++s.test;
    }
    for (const auto& t : x.transcript.variation_tags) ++s.tag_counts[t];
    s.tag_occurrences += x.transcript.variation_tags.size();
    values.insert(x.transcript.value.kind.tag() + "\x1f" + x.transcript.value.canonical);
    lens.push_back(static_cast<double>(text::utf8_length(x.transcript.text)));
    sum += lens.back();
  }
  s.num_tags_used = s.tag_counts.size();
  s.num_unique_values = values.size();
  if (!lens.empty()) {
    s.avg_len_chars = sum / static_cast<double>(lens.size());
    double var = 0.0;
    for (double l : lens) var += (l - s.avg_len_chars) * (l - s.avg_len_chars);
    s.std_len_chars = std::sqrt(var / static_cast<double>(lens.size()));
  }
  return s;
}

namespace {

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    w[c] = header[c].size();
    for (const auto& r : rows) w[c] = std::max(w[c], r[c].size());
  }
  std::ostringstream o;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c == 0) {
        o << fmt::format("{:<{}}", r[c], w[c]);
      } else {
        o << "  " << fmt::format("{:>{}}", r[c], w[c]);
      }
    }
    o << "\n";
  };
  line(header);
  std::vector<std::string> rule;
  for (auto n : w) rule.emplace_back(n, '-');
  line(rule);
  for (const auto& r : rows) line(r);
  return o.str();
}

}  // namespace

std::string format_metrics_table(const std::map<std::string, Metrics>& rows) {
  std::vector<std::vector<std::string>> body;
  for (const auto& [name, m] : rows) {
    body.push_back({name, std::to_string(m.tp), std::to_string(m.fp), std::to_string(m.fn),
                    fmt::format("{:.3f}", m.precision), fmt::format("{:.3f}", m.recall), fmt::format("{:.3f}", m.accuracy),
                    fmt::format("{:.3f}", m.f1)});
  }
  return render_table({"Entity", "TP", "FP", "FN", "P", "R", "Acc", "F1"}, body);
}

std::string format_stats_table(const std::map<std::string, DatasetStats>& rows) {
  std::vector<std::vector<std::string>> body;
  for (const auto& [name, s] : rows) {
    body.push_back({name, std::to_string(s.num_samples),
                    fmt::format("{} / {} / {}", s.train, s.valid, s.test), std::to_string(s.num_tags_used),
                    std::to_string(s.tag_occurrences), std::to_string(s.num_unique_values),
                    fmt::format("{:.1f}±{:.1f}", s.avg_len_chars, s.std_len_chars)});
  }
  return render_table({"Entity", "# Samples", "Train / Valid / Test", "# Tags", "# Tag Occ.", "# Values", "Avg Len"},
                      body);
}

}  // namespace lingvar
