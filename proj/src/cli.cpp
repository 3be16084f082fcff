#include "lingvar/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lingvar/config.hpp"
#include "lingvar/error.hpp"
#include "lingvar/evaluator.hpp"
#include "lingvar/generation.hpp"
#include "lingvar/optimizer.hpp"
#include "lingvar/prompts.hpp"
#include "lingvar/rng.hpp"
#include "lingvar/similarity.hpp"
#include "lingvar/spoken_parser.hpp"
#include "lingvar/text.hpp"
#include "lingvar/validation.hpp"

#ifndef LINGVAR_VERSION
#define LINGVAR_VERSION "0.0.0"
#endif

namespace lingvar {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::string mode;
  std::string profile;
  std::string out_dir;
  std::string output;
  std::int64_t seed = -1;
  std::size_t parallelism = 0;
};

struct Args {
  Common common;
  std::string kind;
  std::string value;
  std::string variations;
  std::string input;
  std::string existing;
  std::string pred;
  std::string gold;
  std::string ratios;
  std::string validation;
  std::string instruction_file;
  std::string train;
  std::string valid;
  std::size_t n = 0;
  std::size_t count = 0;
  std::size_t num_values = 0;
  std::size_t target = 0;
  std::size_t rounds = 0;
  std::size_t iterations = 0;
  std::size_t batch_size = 0;
  std::size_t pool_size = 0;
  std::int64_t mutations = -1;
  bool oracle = false;
};

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::usage_error:
    case ErrorCode::invalid_config:
    case ErrorCode::invalid_ratios:
    case ErrorCode::unknown_kind:
    case ErrorCode::unsupported_combination:
      return 1;
    case ErrorCode::provider_error:
    case ErrorCode::malformed_output:
    case ErrorCode::judge_malformed:
    case ErrorCode::empty_result:
      return 2;
    default:
      return 3;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read '" + path + "'");
  std::stringstream b;
  b << in.rdbuf();
  return b.str();
}

class Session {
 public:
  Session(const std::string& command, const Args& a, std::istream& in, std::ostream& out)
      : command_(command), args_(a), in_(in), out_(out) {
    nlohmann::json raw = a.common.config.empty() ? nlohmann::json::object() : load_config_file(a.common.config);
    cfg_ = RunConfig::from_json(raw);
    if (!a.common.mode.empty()) cfg_.provider_mode = provider_mode_from_string(a.common.mode);
    bool validation_set = raw.contains("generation") && raw["generation"].is_object() &&
                          raw["generation"].contains("validation");
    if (!validation_set && cfg_.provider_mode == ProviderMode::live) cfg_.validation = ValidationMode::both;
    if (a.common.seed >= 0) cfg_.seed = static_cast<std::uint64_t>(a.common.seed);
    if (!a.common.profile.empty()) {
      if (!cfg_.profiles.count(a.common.profile)) {
        throw Error(ErrorCode::invalid_config, "unknown profile '" + a.common.profile + "'");
      }
      cfg_.profile = a.common.profile;
    }
    if (!a.common.out_dir.empty()) cfg_.output_dir = a.common.out_dir;
    if (a.common.parallelism > 0) cfg_.parallelism = a.common.parallelism;
    if (!a.kind.empty()) {
      EntityKind k = EntityKind::from_tag(a.kind);
      if (k.is_extension()) throw Error(ErrorCode::unknown_kind, "unsupported kind '" + a.kind + "'");
      cfg_.field = default_field_spec(k);
    }
    cfg_.optimizer.seed = cfg_.seed;
    if (!cfg_.variations_file.empty()) {
      registry_ = std::make_unique<VariationRegistry>(VariationRegistry::load_file(cfg_.variations_file));
    }
  }

  RunConfig& config() { return cfg_; }
  std::istream& in() { return in_; }
  const VariationRegistry& registry() const { return registry_ ? *registry_ : VariationRegistry::builtin(); }

  ChatBackend& chat() {
    if (!chat_) {
      if (cfg_.provider_mode == ProviderMode::mock) {
        chat_ = std::make_unique<MockChatBackend>(derive_seed(cfg_.seed, "provider"), registry());
      } else {
        chat_ = make_chat_backend(cfg_.provider_mode, cfg_.active_profile(), cfg_.seed);
      }
    }
    return *chat_;
  }
  EmbeddingBackend& embedder() {
    if (!embed_) embed_ = make_embedding_backend(cfg_.provider_mode, cfg_.active_profile());
    return *embed_;
  }

  fs::path out_dir() {
    fs::path p(cfg_.output_dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create '" + p.string() + "': " + ec.message());
    return p;
  }

  // Writes to --output when given, stdout otherwise.
  void emit(const std::string& body) {
    if (args_.common.output.empty()) {
      out_ << body;
      return;
    }
    write_file(args_.common.output, body);
  }

  void write_file(const fs::path& path, const std::string& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::io_error, "cannot write '" + path.string() + "'");
    f << body;
    outputs_.push_back(path.string());
  }

  void manifest(int exit_code) {
    nlohmann::ordered_json m;
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    m["command"] = command_;
    m["started_at"] = ts.str();
    m["version"] = LINGVAR_VERSION;
    m["config_hash"] = text::hex64(text::fnv1a64(cfg_.to_json().dump()));
    m["seed"] = cfg_.seed;
    m["provider_mode"] = to_string(cfg_.provider_mode);
    m["model"] = chat_ ? chat_->model_id() : "";
    m["outputs"] = outputs_;
    m["exit_code"] = exit_code;
    fs::path p = out_dir() / "run_manifest.jsonl";
    std::ofstream f(p, std::ios::app | std::ios::binary);
    f << m.dump() << "\n";
  }

 private:
  std::string command_;
  const Args& args_;
  std::istream& in_;
  std::ostream& out_;
  RunConfig cfg_;
  std::unique_ptr<VariationRegistry> registry_;
  std::unique_ptr<ChatBackend> chat_;
  std::unique_ptr<EmbeddingBackend> embed_;
  std::vector<std::string> outputs_;
};

std::vector<LabeledSample> require_samples(const std::string& path, const char* flag) {
  if (path.empty()) throw Error(ErrorCode::usage_error, std::string(flag) + " is required");
  return read_samples_file(path);
}

std::string samples_jsonl(const std::vector<LabeledSample>& samples) {
  std::string s;
  for (const auto& x : samples) s += to_jsonl_line(x) + "\n";
  return s;
}

SplitRatios parse_ratios(const std::string& s, const SplitRatios& fallback) {
  if (s.empty()) return fallback;
  auto parts = text::split(s, ',');
  if (parts.size() != 3) throw Error(ErrorCode::invalid_ratios, "--ratios needs three comma-separated values");
  try {
    return {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::invalid_ratios, "--ratios: not numbers: " + s);
  }
}

std::vector<std::string> parse_ids(const std::string& s) {
  std::vector<std::string> ids;
  for (const auto& p : text::split(s, ',')) {
    std::string t(text::trim(p));
    if (!t.empty()) ids.push_back(t);
  }
  return ids;
}

int cmd_gen_values(Session& s, const Args& a) {
  std::size_t n = a.n > 0 ? a.n : s.config().num_values;
  auto values = generate_values(s.config().field, n, s.chat());
  std::string body;
  for (const auto& v : values) body += nlohmann::ordered_json(to_json(v)).dump() + "\n";
  s.emit(body);
  return 0;
}

int cmd_gen_transcripts(Session& s, const Args& a) {
  if (a.value.empty()) throw Error(ErrorCode::usage_error, "--value is required");
  EntityValue value = EntityValue::from_raw(s.config().field.kind, a.value);
  std::vector<std::string> existing;
  if (!a.existing.empty()) {
    for (const auto& x : read_samples_file(a.existing)) existing.push_back(x.transcript.text);
  }
  auto got = generate_transcripts(s.config().field, value, parse_ids(a.variations), existing,
                                  a.count > 0 ? a.count : 1, s.chat(), {}, s.registry());
  std::string body;
  for (const auto& t : got) {
    LabeledSample x;
    x.transcript = Transcript{t.text, t.tags, value, Provenance::synthetic};
    body += to_jsonl_line(x) + "\n";
  }
  s.emit(body);
  return 0;
}

int cmd_pipeline(Session& s, const Args& a) {
  RunConfig& c = s.config();
  if (a.num_values > 0) c.num_values = a.num_values;
  if (a.target > 0) c.target_per_pair = a.target;
  if (a.rounds > 0) c.max_rounds = a.rounds;
  if (!a.variations.empty()) c.variations = parse_ids(a.variations);
  if (!a.validation.empty()) c.validation = validation_mode_from_string(a.validation);
  GenerationConfig g = c.generation_config();
  Validator validator(c.field, c.validation, c.validation == ValidationMode::oracle ? nullptr : &s.chat());
  auto result = run_pipeline(g, s.chat(), validator, s.registry());
  fs::path dir = s.out_dir();
  std::string data = samples_jsonl(result.samples);
  s.write_file(dir / "dataset.jsonl", data);
  s.write_file(dir / "pipeline_report.json", result.report.to_json().dump(2) + "\n");
  if (!a.common.output.empty()) s.write_file(a.common.output, data);
  nlohmann::ordered_json summary = {{"samples", result.samples.size()},
                                    {"rounds_used", result.report.rounds_used},
                                    {"invalid_rate", result.report.invalid_rate},
                                    {"shortfall_pairs", result.report.shortfalls.size()}};
  spdlog::info("pipeline: {}", summary.dump());
  return 0;
}

// Sample lines, or {"text", "truth", "kind"} lines where kind defaults to --kind.
std::vector<LabeledSample> read_validation_input(Session& s, const std::string& path) {
  if (path.empty()) throw Error(ErrorCode::usage_error, "--input is required");
  std::istringstream in(read_file(path));
  std::vector<LabeledSample> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_object() && j.contains("truth")) {
      if (!j["text"].is_string() || !j["truth"].is_string()) {
        throw Error(ErrorCode::format_error, path + ":" + std::to_string(n) + ": text and truth must be strings");
      }
      EntityKind kind = j.contains("kind") && j["kind"].is_string() ? EntityKind::from_tag(j["kind"].get<std::string>())
                                                                      : s.config().field.kind;
      LabeledSample x;
      x.transcript.text = j["text"].get<std::string>();
      x.transcript.value = EntityValue::from_raw(kind, j["truth"].get<std::string>());
      out.push_back(std::move(x));
      continue;
    }
    try {
      out.push_back(parse_sample_line(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::format_error, path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

int cmd_validate(Session& s, const Args& a) {
  auto samples = read_validation_input(s, a.input);
  ValidationMode mode = a.validation.empty() ? s.config().validation : validation_mode_from_string(a.validation);
  std::string body;
  for (const auto& x : samples) {
    FieldSpec spec = default_field_spec(x.transcript.value.kind);
    auto o = validate(x.transcript.text, x.transcript.value, spec, mode,
                      mode == ValidationMode::oracle ? nullptr : &s.chat());
    nlohmann::ordered_json j = {{"text", x.transcript.text}, {"truth", x.transcript.value.canonical}};
    auto outcome = to_json(o);
    for (auto& [k, v] : outcome.items()) j[k] = v;
    body += j.dump() + "\n";
  }
  s.emit(body);
  return 0;
}

int cmd_split(Session& s, const Args& a) {
  auto samples = require_samples(a.input, "--input");
  auto out = split(std::move(samples), parse_ratios(a.ratios, s.config().ratios), s.config().seed);
  s.emit(samples_jsonl(out));
  auto st = dataset_stats(out);
  spdlog::info("split: {} / {} / {}", st.train, st.valid, st.test);
  return 0;
}

int cmd_stats(Session& s, const Args& a, std::ostream& out) {
  auto samples = require_samples(a.input, "--input");
  std::map<std::string, std::vector<LabeledSample>> by_kind;
  for (const auto& x : samples) by_kind[x.transcript.value.kind.tag()].push_back(x);
  std::map<std::string, DatasetStats> rows;
  nlohmann::ordered_json j;
  j["overall"] = dataset_stats(samples).to_json();
  for (const auto& [k, v] : by_kind) {
    rows[k] = dataset_stats(v);
    j["by_kind"][k] = rows[k].to_json();
  }
  s.emit(j.dump(2) + "\n");
  out << format_stats_table(rows);
  return 0;
}

int cmd_score(Session& s, const Args& a, std::ostream& out) {
  auto gold = require_samples(a.gold, "--gold");
  if (a.pred.empty()) throw Error(ErrorCode::usage_error, "--pred is required");
  std::vector<std::optional<std::string>> preds;
  std::istringstream in(read_file(a.pred));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      const auto& p = j.at("predicted");
      preds.push_back(p.is_null() ? std::nullopt : std::optional<std::string>(p.get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::format_error, a.pred + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  if (preds.size() != gold.size()) {
    throw Error(ErrorCode::format_error, "prediction count " + std::to_string(preds.size()) +
                                             " does not match gold count " + std::to_string(gold.size()));
  }
  std::map<std::string, std::vector<Prediction>> by_kind;
  std::vector<Prediction> all;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    Prediction p{preds[i], gold[i].transcript.value};
    by_kind[p.gold.kind.tag()].push_back(p);
    all.push_back(p);
  }
  std::map<std::string, Metrics> rows;
  nlohmann::ordered_json j;
  j["overall"] = score(all).to_json();
  for (const auto& [k, v] : by_kind) {
    rows[k] = score(v);
    j["by_kind"][k] = rows[k].to_json();
  }
  s.emit(j.dump(2) + "\n");
  out << format_metrics_table(rows);
  return 0;
}

int cmd_extract(Session& s, const Args& a) {
  std::vector<LabeledSample> samples;
  if (a.input.empty() || a.input == "-") {
    // Plain transcripts, one per line, of the configured kind.
    std::string line;
    while (std::getline(s.in(), line)) {
      if (text::trim(line).empty()) continue;
      LabeledSample x;
      x.transcript.text = line;
      x.transcript.value.kind = s.config().field.kind;
      samples.push_back(std::move(x));
    }
  } else {
    samples = read_samples_file(a.input);
  }
  std::string body;
  for (const auto& x : samples) {
    std::optional<std::string> got;
    if (a.oracle) {
      if (auto v = extract(x.transcript.value.kind, x.transcript.text)) got = v->canonical;
    } else {
      FieldSpec spec =
          x.transcript.value.kind == s.config().field.kind ? s.config().field : default_field_spec(x.transcript.value.kind);
      std::string instruction =
          a.instruction_file.empty() ? base_extraction_instruction(spec) : read_file(a.instruction_file);
      got = provider_extractor(s.chat(), spec)(instruction, x);
    }
    nlohmann::ordered_json j = {{"text", x.transcript.text},
                                {"predicted", got ? nlohmann::ordered_json(*got) : nlohmann::ordered_json(nullptr)}};
    body += j.dump() + "\n";
  }
  s.emit(body);
  return 0;
}

int cmd_optimize(Session& s, const Args& a) {
  auto train = require_samples(a.train, "--train");
  auto valid = require_samples(a.valid, "--valid");
  OptimizerConfig oc = s.config().optimizer;
  if (a.iterations > 0) oc.iterations = a.iterations;
  if (a.batch_size > 0) oc.batch_size = a.batch_size;
  if (a.pool_size > 0) oc.pool_size = a.pool_size;
  if (a.mutations >= 0) oc.mutation_count = static_cast<std::size_t>(a.mutations);
  oc.batch_size = std::min(oc.batch_size, train.size());
  oc.parallelism = s.config().provider_mode == ProviderMode::mock ? 1 : s.config().parallelism;
  const FieldSpec& spec = s.config().field;
  std::string base = a.instruction_file.empty() ? base_extraction_instruction(spec) : read_file(a.instruction_file);
  auto r = optimize(base, train, valid, provider_extractor(s.chat(), spec), provider_mutator(s.chat(), spec), oc);
  fs::path dir = s.out_dir();
  std::string trace;
  for (const auto& t : r.trace) trace += t.to_json().dump() + "\n";
  s.write_file(dir / "optimizer_trace.jsonl", trace);
  s.write_file(dir / "optimized_prompt.txt", r.best.instruction + "\n");
  nlohmann::ordered_json j = {{"best_candidate", r.best.id},
                              {"depth", r.best.depth},
                              {"valid_score", r.best.valid_score.value_or(0.0)},
                              {"base_valid_score", r.candidates.front().valid_score.value_or(0.0)},
                              {"running_best", r.running_best},
                              {"candidates", r.candidates.size()}};
  s.emit(j.dump(2) + "\n");
  return 0;
}

int cmd_similarity(Session& s, const Args& a, std::ostream& out) {
  auto samples = require_samples(a.input, "--input");
  SimilarityConfig sc;
  sc.seed = derive_seed(s.config().seed, "similarity");
  auto report = pair_and_score(samples, s.embedder(), nullptr, sc, s.registry());
  s.write_file(s.out_dir() / "similarity.json", report.to_json().dump(2) + "\n");
  s.emit(report.to_json().dump(2) + "\n");
  out << report.table();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  if (!spdlog::get("lingvar")) spdlog::set_default_logger(spdlog::stderr_color_mt("lingvar"));
  CLI::App app{"Synthetic spoken-entity data generation and extraction evaluation"};
  app.set_version_flag("--version", LINGVAR_VERSION);
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", a.common.config, "JSON or TOML configuration file");
    sub->add_option("--mode", a.common.mode, "provider mode")->check(CLI::IsMember({"mock", "live"}));
    sub->add_option("--profile", a.common.profile, "provider profile name");
    sub->add_option("--seed", a.common.seed, "global seed");
    sub->add_option("--out", a.common.out_dir, "output directory (manifests and reports)");
    sub->add_option("-o,--output", a.common.output, "write the main result here instead of stdout");
    sub->add_option("--parallelism", a.common.parallelism, "concurrent provider calls (live mode)");
    sub->add_option("--kind", a.kind, "zip_code, date_of_birth or person_name");
  };

  auto* gv = app.add_subcommand("gen-values", "generate entity values");
  common(gv);
  gv->add_option("-n,--n", a.n, "number of values");

  auto* gt = app.add_subcommand("gen-transcripts", "generate transcripts for one value");
  common(gt);
  gt->add_option("--value", a.value, "entity value");
  gt->add_option("--variations", a.variations, "comma-separated variation ids");
  gt->add_option("--count", a.count, "transcripts to request");
  gt->add_option("--existing", a.existing, "JSONL of transcripts to avoid");

  auto* pl = app.add_subcommand("pipeline", "run value, transcript and validation stages to a balanced dataset");
  common(pl);
  pl->add_option("--num-values", a.num_values);
  pl->add_option("--target", a.target, "validated transcripts per value x variation pair");
  pl->add_option("--rounds", a.rounds, "regeneration rounds");
  pl->add_option("--variations", a.variations, "comma-separated variation ids (default: all)");
  pl->add_option("--validation", a.validation)->check(CLI::IsMember({"oracle", "provider", "both"}));

  auto* va = app.add_subcommand("validate", "check that each transcript carries its value");
  common(va);
  va->add_option("--input", a.input, "sample JSONL or {text, truth, kind} lines");
  va->add_option("--validation", a.validation)->check(CLI::IsMember({"oracle", "provider", "both"}));

  auto* sp = app.add_subcommand("split", "assign train/valid/test splits");
  common(sp);
  sp->add_option("--input", a.input, "sample JSONL");
  sp->add_option("--ratios", a.ratios, "train,valid,test");

  auto* st = app.add_subcommand("stats", "dataset statistics");
  common(st);
  st->add_option("--input", a.input, "sample JSONL");

  auto* sc = app.add_subcommand("score", "score predictions against gold samples");
  common(sc);
  sc->add_option("--pred", a.pred, "JSONL with a \"predicted\" field per line");
  sc->add_option("--gold", a.gold, "sample JSONL");

  auto* ex = app.add_subcommand("extract", "extract values from transcripts");
  common(ex);
  ex->add_option("--input", a.input, "sample JSONL; plain transcripts are read from stdin when omitted");
  ex->add_option("--instruction", a.instruction_file, "instruction text file");
  ex->add_flag("--oracle", a.oracle, "use the rule-based parser instead of the provider");

  auto* op = app.add_subcommand("optimize", "optimize an extraction instruction");
  common(op);
  op->add_option("--train", a.train, "training sample JSONL");
  op->add_option("--valid", a.valid, "validation sample JSONL");
  op->add_option("--instruction", a.instruction_file, "base instruction file");
  op->add_option("--iterations", a.iterations);
  op->add_option("--batch-size", a.batch_size);
  op->add_option("--pool-size", a.pool_size);
  op->add_option("--mutations", a.mutations);

  auto* si = app.add_subcommand("similarity", "compare real transcripts with synthetic counterparts");
  common(si);
  si->add_option("--input", a.input, "real sample JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  std::unique_ptr<Session> session;
  int code = 0;
  try {
    session = std::make_unique<Session>(name, a, in, out);
    if (name == "gen-values") code = cmd_gen_values(*session, a);
    else if (name == "gen-transcripts") code = cmd_gen_transcripts(*session, a);
    else if (name == "pipeline") code = cmd_pipeline(*session, a);
    else if (name == "validate") code = cmd_validate(*session, a);
    else if (name == "split") code = cmd_split(*session, a);
    else if (name == "stats") code = cmd_stats(*session, a, err);
    else if (name == "score") code = cmd_score(*session, a, err);
    else if (name == "extract") code = cmd_extract(*session, a);
    else if (name == "optimize") code = cmd_optimize(*session, a);
    else if (name == "similarity") code = cmd_similarity(*session, a, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    code = exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    code = 3;
  }
  if (session) {
    try {
      session->manifest(code);
    } catch (const std::exception& e) {
      err << "warning: could not write run manifest: " << e.what() << "\n";
    }
  }
  return code;
}

}  // namespace lingvar
