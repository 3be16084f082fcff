#include "lingvar/optimizer.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "lingvar/error.hpp"
#include "lingvar/rng.hpp"
#include "lingvar/spoken_parser.hpp"
#include "lingvar/text.hpp"

namespace lingvar {
namespace {

std::vector<std::optional<std::string>> run_extractor(const std::string& instruction,
                                                      const std::vector<const LabeledSample*>& samples,
                                                      const Extractor& extractor, std::size_t parallelism) {
  std::vector<std::optional<std::string>> out(samples.size());
  auto work = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) out[i] = extractor(instruction, *samples[i]);
  };
  if (parallelism <= 1 || samples.size() < 2) {
    work(0, samples.size());
    return out;
  }
  std::size_t chunk = (samples.size() + parallelism - 1) / parallelism;
  std::vector<std::future<void>> futures;
  for (std::size_t from = 0; from < samples.size(); from += chunk) {
    futures.push_back(std::async(std::launch::async, work, from, std::min(samples.size(), from + chunk)));
  }
  for (auto& f : futures) f.get();
  return out;
}

Metrics score_of(const std::vector<const LabeledSample*>& samples, const std::vector<std::optional<std::string>>& preds) {
  std::vector<Prediction> p;
  p.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) p.push_back({preds[i], samples[i]->transcript.value});
  return score(p);
}

std::vector<const LabeledSample*> pointers(const std::vector<LabeledSample>& v) {
  std::vector<const LabeledSample*> out;
  for (const auto& s : v) out.push_back(&s);
  return out;
}

// Higher score first, then shallower, shorter, older.
bool ahead(double sa, const PromptCandidate& a, double sb, const PromptCandidate& b) {
  if (sa != sb) return sa > sb;
  if (a.depth != b.depth) return a.depth < b.depth;
  if (a.instruction.size() != b.instruction.size()) return a.instruction.size() < b.instruction.size();
  return a.id < b.id;
}

}  // namespace

nlohmann::ordered_json TraceRecord::to_json() const {
  nlohmann::ordered_json j;
  j["iteration"] = iteration;
  j["candidate"] = candidate;
  j["scope"] = scope;
  j["score"] = score;
  j["running_best"] = running_best;
  if (!note.empty()) j["note"] = note;
  return j;
}

Extractor provider_extractor(ChatBackend& backend, const FieldSpec& spec, RetryPolicy retry) {
  return [&backend, spec, retry](const std::string& instruction, const LabeledSample& s) -> std::optional<std::string> {
    auto t = std::get<FreeText>(chat(backend, extraction_request(instruction, spec, s.transcript.text), retry)).text;
    std::string v(text::trim(t));
    if (v.empty()) return std::nullopt;
    return v;
  };
}

Extractor oracle_extractor() {
  return [](const std::string&, const LabeledSample& s) -> std::optional<std::string> {
    auto v = extract(s.transcript.value.kind, s.transcript.text);
    if (!v) return std::nullopt;
    return v->canonical;
  };
}

Mutator provider_mutator(ChatBackend& backend, const FieldSpec& spec, RetryPolicy retry) {
  return [&backend, spec, retry](const std::string& instruction, const std::vector<FailureCase>& failures,
                                 std::size_t count) {
    return std::get<InstructionsPayload>(chat(backend, mutation_request(instruction, spec, failures, count), retry))
        .instructions;
  };
}

std::string dataset_fingerprint(const std::vector<LabeledSample>& samples) {
  std::string all;
  for (const auto& s : samples) all += to_jsonl_line(s) + "\n";
  return text::hex64(text::fnv1a64(all));
}

Metrics evaluate_prompt(const PromptCandidate& candidate, const std::vector<LabeledSample>& samples,
                        const Extractor& extractor, std::size_t parallelism) {
  auto ptrs = pointers(samples);
  return score_of(ptrs, run_extractor(candidate.instruction, ptrs, extractor, parallelism));
}

OptimizeResult optimize(const std::string& base_instruction, const std::vector<LabeledSample>& trainset,
                        const std::vector<LabeledSample>& validset, const Extractor& extractor, const Mutator& mutator,
                        const OptimizerConfig& config) {
  if (text::trim(base_instruction).empty()) throw Error(ErrorCode::usage_error, "base instruction is empty");
  if (trainset.empty() || validset.empty()) throw Error(ErrorCode::usage_error, "trainset and validset must be non-empty");
  if (config.batch_size < 1 || config.batch_size > trainset.size()) {
    throw Error(ErrorCode::usage_error, "batch_size must be between 1 and the trainset size");
  }
  if (config.iterations < 1 || config.pool_size < 1) {
    throw Error(ErrorCode::usage_error, "iterations and pool_size must be positive");
  }

  OptimizeResult r;
  const std::string fp = dataset_fingerprint(validset);
  const auto valid_ptrs = pointers(validset);
  std::set<std::string> seen = {base_instruction};
  r.candidates.push_back({0, base_instruction, std::nullopt, 0, std::nullopt, std::nullopt, ""});
  std::vector<std::size_t> pool = {0};
  double running = 0.0;

  auto valid_of = [&](std::size_t id, std::size_t iteration) {
    PromptCandidate& c = r.candidates[id];
    if (!c.valid_score) {
      c.valid_score = score_of(valid_ptrs, run_extractor(c.instruction, valid_ptrs, extractor, config.parallelism)).accuracy;
      c.valid_fingerprint = fp;
      running = std::max(running, *c.valid_score);
      r.trace.push_back({iteration, id, "valid", *c.valid_score, running, ""});
    }
    return *c.valid_score;
  };
  auto best_valid = [&]() {
    std::size_t best = pool.front();
    for (std::size_t id : pool) {
      if (ahead(*r.candidates[id].valid_score, r.candidates[id], *r.candidates[best].valid_score, r.candidates[best])) {
        best = id;
      }
    }
    return best;
  };

  valid_of(0, 0);
  r.running_best.push_back(running);
  Rng rng(derive_seed(config.seed, "optimizer"));
  std::vector<std::size_t> order(trainset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t it = 1; it <= config.iterations; ++it) {
    rng.shuffle(order);
    std::vector<const LabeledSample*> batch;
    for (std::size_t i = 0; i < config.batch_size; ++i) batch.push_back(&trainset[order[i]]);

    std::map<std::size_t, std::vector<std::optional<std::string>>> preds;
    auto score_batch = [&](std::size_t id) {
      preds[id] = run_extractor(r.candidates[id].instruction, batch, extractor, config.parallelism);
      double s = score_of(batch, preds[id]).accuracy;
      r.candidates[id].train_score = s;
      r.trace.push_back({it, id, "batch", s, running, ""});
    };
    for (std::size_t id : pool) score_batch(id);

    std::size_t lead = pool.front();
    for (std::size_t id : pool) {
      if (ahead(*r.candidates[id].train_score, r.candidates[id], *r.candidates[lead].train_score, r.candidates[lead])) {
        lead = id;
      }
    }

    std::vector<FailureCase> failures;
    std::size_t bytes = 0;
    for (std::size_t i = 0; i < batch.size() && failures.size() < config.max_failures; ++i) {
      const auto& gold = batch[i]->transcript.value;
      const auto& p = preds[lead][i];
      if (p && !text::trim(*p).empty() && values_equivalent(gold.kind, *p, gold.canonical)) continue;
      FailureCase f{batch[i]->transcript.text, gold.canonical, p.value_or("")};
      std::size_t size = f.transcript.size() + f.gold.size() + f.predicted.size();
      if (!failures.empty() && bytes + size > config.failure_byte_budget) break;
      bytes += size;
      failures.push_back(std::move(f));
    }

    if (config.mutation_count > 0 && !failures.empty()) {
      std::vector<std::string> mutants;
      try {
        mutants = mutator(r.candidates[lead].instruction, failures, config.mutation_count);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::provider_error && e.code() != ErrorCode::malformed_output) throw;
        r.trace.push_back({it, lead, "mutation_error", 0.0, running, e.what()});
      }
      std::size_t admitted = 0;
      for (const auto& m : mutants) {
        if (admitted == config.mutation_count) break;
        if (text::trim(m).empty() || !seen.insert(m).second) continue;
        std::size_t id = r.candidates.size();
        r.candidates.push_back({id, m, lead, r.candidates[lead].depth + 1, std::nullopt, std::nullopt, ""});
        pool.push_back(id);
        score_batch(id);
        ++admitted;
      }
    }

    // Valid scores decide which candidate is protected alongside the base.
    for (std::size_t id : pool) valid_of(id, it);
    const std::size_t champion = best_valid();
    std::vector<std::size_t> ranked = pool;
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
      return ahead(*r.candidates[a].train_score, r.candidates[a], *r.candidates[b].train_score, r.candidates[b]);
    });
    std::vector<std::size_t> keep;
    for (std::size_t id : {std::size_t{0}, champion}) {
      if (std::find(keep.begin(), keep.end(), id) == keep.end()) keep.push_back(id);
    }
    for (std::size_t id : ranked) {
      if (keep.size() >= std::max<std::size_t>(config.pool_size, 1)) break;
      if (std::find(keep.begin(), keep.end(), id) == keep.end()) keep.push_back(id);
    }
    std::sort(keep.begin(), keep.end());
    pool = keep;
    r.running_best.push_back(running);
  }

  r.best = r.candidates[best_valid()];
  return r;
}

}  // namespace lingvar
