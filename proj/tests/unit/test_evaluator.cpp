#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lingvar/error.hpp"
#include "lingvar/evaluator.hpp"

using namespace lingvar;

namespace {

LabeledSample sample(const std::string& text, const std::string& zip, std::set<std::string> tags = {"casual"}) {
  LabeledSample s;
  s.transcript = Transcript{text, std::move(tags), EntityValue::from_raw(EntityKind::zip_code(), zip),
                            Provenance::synthetic};
  s.validated = true;
  return s;
}

}  // namespace

TEST_CASE("metrics from counts", "[evaluator]") {
  auto m = Metrics::from_counts(6, 2, 2);
  CHECK(m.precision == Catch::Approx(0.75));
  CHECK(m.recall == Catch::Approx(0.75));
  CHECK(m.f1 == Catch::Approx(0.75));
  CHECK(m.accuracy == Catch::Approx(0.6));
  auto z = Metrics::from_counts(0, 0, 0);
  CHECK(z.f1 == 0.0);
  CHECK(z.accuracy == 0.0);
}

TEST_CASE("scoring counts empty predictions as misses", "[evaluator]") {
  auto gold = EntityValue::from_raw(EntityKind::zip_code(), "02134");
  std::vector<Prediction> p = {
      {std::string("02134"), gold}, {std::string("2134"), gold}, {std::string("99999"), gold},
      {std::string("  "), gold},    {std::nullopt, gold},
  };
  auto m = score(p);
  CHECK(m.tp == 1);
  CHECK(m.fp == 2);
  CHECK(m.fn == 2);
}

TEST_CASE("split sizes", "[evaluator]") {
  CHECK(split_sizes(100, {}) == std::array<std::size_t, 3>{70, 15, 15});
  CHECK(split_sizes(7, {}) == std::array<std::size_t, 3>{5, 1, 1});
  CHECK(split_sizes(5635, {}) == std::array<std::size_t, 3>{3945, 845, 845});
  CHECK(split_sizes(0, {}) == std::array<std::size_t, 3>{0, 0, 0});
  try {
    split_sizes(10, {0.5, 0.5, 0.0});
    FAIL("expected invalid_ratios");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_ratios);
  }
  CHECK_THROWS_AS(split_sizes(10, {0.6, 0.3, 0.3}), Error);
}

TEST_CASE("split keeps every value in train and is deterministic", "[evaluator]") {
  std::vector<LabeledSample> samples;
  for (int v = 0; v < 10; ++v) {
    for (int k = 0; k < 4; ++k) {
      samples.push_back(sample("t" + std::to_string(v) + "_" + std::to_string(k), "1000" + std::to_string(v)));
    }
  }
  auto a = split(samples, {}, 5);
  auto b = split(samples, {}, 5);
  std::map<Split, std::size_t> counts;
  std::set<std::string> train_values;
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].split.has_value());
    CHECK(a[i].split == b[i].split);
    ++counts[*a[i].split];
    if (*a[i].split == Split::train) train_values.insert(a[i].transcript.value.canonical);
  }
  CHECK(counts[Split::train] == 28);
  CHECK(counts[Split::valid] == 6);
  CHECK(counts[Split::test] == 6);
  CHECK(train_values.size() == 10);
}

TEST_CASE("dataset stats", "[evaluator]") {
  auto a = sample("abc", "11111", {"casual", "polite"});
  a.split = Split::train;
  auto b = sample("abcde", "11111", {"casual"});
  auto c = sample("\xc3\xa9t\xc3\xa9", "22222", {"polite"});
  c.split = Split::test;
  auto s = dataset_stats({a, b, c});
  CHECK(s.num_samples == 3);
  CHECK(s.train == 1);
  CHECK(s.test == 1);
  CHECK(s.unassigned == 1);
  CHECK(s.num_tags_used == 2);
  CHECK(s.tag_occurrences == 4);
  CHECK(s.num_unique_values == 2);
  CHECK(s.avg_len_chars == Catch::Approx(11.0 / 3.0));
  double mean = 11.0 / 3.0;
  double var = ((3 - mean) * (3 - mean) + (5 - mean) * (5 - mean) + (3 - mean) * (3 - mean)) / 3.0;
  CHECK(s.std_len_chars == Catch::Approx(std::sqrt(var)));
  CHECK(s.tag_counts.at("casual") == 2);
}

TEST_CASE("tables list every row", "[evaluator]") {
  auto t = format_metrics_table({{"zip_code", Metrics::from_counts(1, 0, 1)}});
  CHECK(t.find("zip_code") != std::string::npos);
  CHECK(t.find("0.5") != std::string::npos);
  auto s = format_stats_table({{"zip_code", dataset_stats({sample("x", "11111")})}});
  CHECK(s.find("zip_code") != std::string::npos);
}
