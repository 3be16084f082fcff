#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lingvar/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "lingvar");
  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = lingvar::run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("lingvar_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream b;
  b << f.rdbuf();
  return b.str();
}

}  // namespace

TEST_CASE("usage errors exit 1", "[cli]") {
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"gen-values", "--mode", "sideways"}).code == 1);
  auto dir = scratch("usage");
  CHECK(run({"split", "--out", dir.string()}).code == 1);
  CHECK(run({"gen-values", "--out", dir.string(), "--kind", "shoe_size"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("mock pipeline, split, stats and score", "[cli]") {
  auto dir = scratch("flow");
  auto r = run({"pipeline", "--out", dir.string(), "--kind", "zip_code", "--num-values", "2", "--target", "1",
                "--variations", "casual,polite", "--seed", "4"});
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(dir / "dataset.jsonl"));
  REQUIRE(fs::exists(dir / "pipeline_report.json"));
  auto report = nlohmann::json::parse(slurp(dir / "pipeline_report.json"));
  CHECK(report.at("shortfalls").empty());

  auto s = run({"split", "--out", dir.string(), "--input", (dir / "dataset.jsonl").string(), "-o",
                (dir / "split.jsonl").string()});
  REQUIRE(s.code == 0);
  CHECK(run({"stats", "--out", dir.string(), "--input", (dir / "split.jsonl").string()}).code == 0);

  auto e = run({"extract", "--oracle", "--out", dir.string(), "--input", (dir / "split.jsonl").string(), "-o",
                (dir / "pred.jsonl").string()});
  REQUIRE(e.code == 0);
  auto sc = run({"score", "--out", dir.string(), "--pred", (dir / "pred.jsonl").string(), "--gold",
                 (dir / "split.jsonl").string()});
  CHECK(sc.code == 0);
  CHECK(sc.out.find("\"accuracy\"") != std::string::npos);

  auto bad_ratio = run({"split", "--out", dir.string(), "--input", (dir / "dataset.jsonl").string(), "--ratios",
                        "0.5,0.5,0.5"});
  CHECK(bad_ratio.code == 1);
}

TEST_CASE("extract reads plain transcripts from stdin", "[cli]") {
  auto dir = scratch("stdin");
  auto r = run({"extract", "--oracle", "--kind", "zip_code", "--out", dir.string()}, "nine oh two one oh\nno idea\n");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("90210") != std::string::npos);
}

TEST_CASE("data errors exit 3 and provider errors exit 2", "[cli]") {
  auto dir = scratch("errors");
  std::ofstream(dir / "broken.jsonl") << "{not json\n";
  CHECK(run({"stats", "--out", dir.string(), "--input", (dir / "broken.jsonl").string()}).code == 3);
  CHECK(run({"stats", "--out", dir.string(), "--input", (dir / "missing.jsonl").string()}).code == 3);

  ::setenv("LINGVAR_CLI_TEST_KEY", "sk-never-print-me", 1);
  std::ofstream(dir / "live.json") << R"({"profile": "x", "providers": {"x": {"backend": "openai",
      "endpoint": "http://127.0.0.1:9", "model": "m", "credential_env": "LINGVAR_CLI_TEST_KEY", "timeout_ms": 300}}})";
  auto r = run({"gen-values", "--mode", "live", "--config", (dir / "live.json").string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("sk-never-print-me") == std::string::npos);

  auto manifest = slurp(dir / "run_manifest.jsonl");
  CHECK(manifest.find("sk-never-print-me") == std::string::npos);
  std::istringstream lines(manifest);
  std::string line, last;
  while (std::getline(lines, line)) {
    if (!line.empty()) last = line;
  }
  auto m = nlohmann::json::parse(last);
  CHECK(m.at("command") == "gen-values");
  CHECK(m.at("exit_code") == 2);
  CHECK(m.at("provider_mode") == "live");
  CHECK(m.contains("config_hash"));
}
