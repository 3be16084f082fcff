#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lingvar/error.hpp"
#include "lingvar/similarity.hpp"

using namespace lingvar;

TEST_CASE("cosine", "[similarity]") {
  CHECK(cosine({1, 0}, {1, 0}) == Catch::Approx(1.0));
  CHECK(cosine({1, 0}, {0, 2}) == Catch::Approx(0.0).margin(1e-12));
  CHECK(cosine({1, 1}, {-1, -1}) == Catch::Approx(-1.0));
  try {
    cosine({1, 0}, {1, 0, 0});
    FAIL("expected dimension_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dimension_mismatch);
  }
  try {
    cosine({0, 0}, {1, 0});
    FAIL("expected zero_vector");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_vector);
  }
}

TEST_CASE("overlap categories", "[similarity]") {
  using S = std::set<std::string>;
  CHECK(overlap_category(S{"a", "b"}, S{"a", "b"}) == OverlapCategory::match);
  CHECK(overlap_category(S{"a"}, S{"a", "b"}) == OverlapCategory::superset);
  CHECK(overlap_category(S{"a", "b"}, S{"a"}) == OverlapCategory::subset);
  CHECK(overlap_category(S{"a"}, S{"b"}) == OverlapCategory::null_overlap);
  CHECK(overlap_category(S{"a"}, S{}) == OverlapCategory::null_overlap);
  CHECK(overlap_category(S{"a", "b"}, S{"b", "c"}) == OverlapCategory::partial_overlap);
  CHECK_THROWS_AS(overlap_category(S{}, S{"a"}), Error);
  for (auto c : {OverlapCategory::match, OverlapCategory::superset, OverlapCategory::subset,
                 OverlapCategory::null_overlap, OverlapCategory::partial_overlap}) {
    CHECK(overlap_category_from_string(to_string(c)) == c);
  }
  CHECK_THROWS_AS(overlap_category_from_string("overlapish"), Error);
}

TEST_CASE("bucket stats", "[similarity]") {
  auto s = bucket_stats({0.2, 0.4, 0.6});
  CHECK(s.n == 3);
  CHECK(s.mean == Catch::Approx(0.4));
  CHECK(s.std == Catch::Approx(std::sqrt(0.08 / 3.0)));
  CHECK(s.min == Catch::Approx(0.2));
  CHECK(s.max == Catch::Approx(0.6));
  CHECK(bucket_stats({}).n == 0);
}

TEST_CASE("pair and score realizes the requested categories", "[similarity]") {
  std::vector<LabeledSample> real;
  for (const char* text : {"yeah, it's nine oh two one oh", "my zip code is one two three four five"}) {
    LabeledSample s;
    auto truth = std::string(text).find("nine") != std::string::npos ? "90210" : "12345";
    s.transcript = Transcript{text, {}, EntityValue::from_raw(EntityKind::zip_code(), truth), Provenance::real};
    real.push_back(std::move(s));
  }
  MockEmbeddingBackend emb(64);
  SimilarityConfig cfg;
  cfg.seed = 1;
  auto r = pair_and_score(real, emb, nullptr, cfg);
  CHECK(r.skipped_samples == 0);
  REQUIRE_FALSE(r.pairs.empty());
  for (const auto& p : r.pairs) {
    CHECK(p.kind == "zip_code");
    CHECK(p.category == overlap_category(p.real_tags, p.synth_tags));
    CHECK(p.cosine <= 1.0 + 1e-9);
  }
  CHECK(r.pairs.size() + r.replan_failures == real.size() * cfg.targets.size());
  auto j = r.to_json();
  CHECK(j.contains("pairs"));
  CHECK(r.table().find("zip_code") != std::string::npos);
}
