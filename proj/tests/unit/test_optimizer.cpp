#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "lingvar/optimizer.hpp"

using namespace lingvar;
using lingvar::testing::ScriptedChat;

namespace {

std::vector<LabeledSample> samples(int n, int offset) {
  std::vector<LabeledSample> out;
  for (int i = 0; i < n; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%05d", offset + i);
    LabeledSample s;
    s.transcript = Transcript{"item " + std::to_string(offset + i), {"casual"},
                              EntityValue::from_raw(EntityKind::zip_code(), buf), Provenance::synthetic};
    out.push_back(std::move(s));
  }
  return out;
}

// Correct on a sample iff the instruction has at least (index % 4) exclamation marks.
Extractor bang_extractor() {
  return [](const std::string& instruction, const LabeledSample& s) -> std::optional<std::string> {
    auto bangs = static_cast<int>(std::count(instruction.begin(), instruction.end(), '!'));
    int idx = std::stoi(s.transcript.value.canonical);
    if (bangs >= idx % 4) return s.transcript.value.canonical;
    return std::nullopt;
  };
}

Mutator bang_mutator() {
  return [](const std::string& instruction, const std::vector<FailureCase>&, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(instruction + std::string(i + 1, '!'));
    return out;
  };
}

}  // namespace

TEST_CASE("evaluate prompt counts misses", "[optimizer]") {
  PromptCandidate c;
  c.instruction = "base";
  auto m = evaluate_prompt(c, samples(8, 0), bang_extractor());
  CHECK(m.tp == 2);
  CHECK(m.fn == 6);
  auto parallel = evaluate_prompt(c, samples(8, 0), bang_extractor(), 4);
  CHECK(parallel.tp == m.tp);
}

TEST_CASE("optimizer improves monotonically", "[optimizer]") {
  OptimizerConfig cfg;
  cfg.iterations = 3;
  cfg.batch_size = 8;
  cfg.mutation_count = 2;
  cfg.seed = 3;
  auto r = optimize("base", samples(40, 0), samples(20, 100), bang_extractor(), bang_mutator(), cfg);
  REQUIRE(r.running_best.size() == 4);
  for (std::size_t i = 1; i < r.running_best.size(); ++i) CHECK(r.running_best[i] >= r.running_best[i - 1]);
  CHECK(r.running_best.back() > r.running_best.front());
  REQUIRE(r.best.valid_score.has_value());
  CHECK(*r.best.valid_score == Catch::Approx(r.running_best.back()));
  CHECK(r.candidates.front().id == 0);
  CHECK_FALSE(r.candidates.front().parent.has_value());
  CHECK_FALSE(r.trace.empty());

  auto again = optimize("base", samples(40, 0), samples(20, 100), bang_extractor(), bang_mutator(), cfg);
  CHECK(again.best.instruction == r.best.instruction);
}

TEST_CASE("mutation failures are traced, not fatal", "[optimizer]") {
  OptimizerConfig cfg;
  cfg.iterations = 2;
  cfg.batch_size = 5;
  Mutator broken = [](const std::string&, const std::vector<FailureCase>&, std::size_t) -> std::vector<std::string> {
    throw Error(ErrorCode::provider_error, "down");
  };
  auto r = optimize("base", samples(10, 0), samples(10, 0), bang_extractor(), broken, cfg);
  CHECK(r.best.instruction == "base");
  bool saw = false;
  for (const auto& t : r.trace) saw = saw || t.scope == "mutation_error";
  CHECK(saw);
}

TEST_CASE("optimizer rejects empty data", "[optimizer]") {
  CHECK_THROWS_AS(optimize("base", {}, samples(2, 0), bang_extractor(), bang_mutator(), {}), Error);
  CHECK_THROWS_AS(optimize("base", samples(2, 0), {}, bang_extractor(), bang_mutator(), {}), Error);
}

TEST_CASE("provider extractor and mutator", "[optimizer]") {
  auto spec = default_field_spec(EntityKind::zip_code());
  ScriptedChat chat({" 00003\n", "   "});
  auto ex = provider_extractor(chat, spec, testing::no_wait());
  auto s = samples(1, 3)[0];
  CHECK(ex("x", s) == std::optional<std::string>("00003"));
  CHECK_FALSE(ex("x", s).has_value());

  ScriptedChat mut({R"({"instructions": ["a", "b"]})"});
  auto m = provider_mutator(mut, spec, testing::no_wait());
  CHECK(m("base", {}, 2) == std::vector<std::string>{"a", "b"});

  CHECK(dataset_fingerprint(samples(3, 0)) == dataset_fingerprint(samples(3, 0)));
  CHECK(dataset_fingerprint(samples(3, 0)) != dataset_fingerprint(samples(3, 1)));
}
