#include "lingvar/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "lingvar/error.hpp"
#include "lingvar/generation.hpp"
#include "lingvar/renderer.hpp"
#include "lingvar/rng.hpp"

namespace lingvar {

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::dimension_mismatch, fmt::format("{} vs {}", a.size(), b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::zero_vector, "cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::string_view to_string(OverlapCategory c) {
  switch (c) {
    case OverlapCategory::match: return "match";
    case OverlapCategory::superset: return "superset";
    case OverlapCategory::subset: return "subset";
    case OverlapCategory::null_overlap: return "null_overlap";
    case OverlapCategory::partial_overlap: return "partial_overlap";
  }
  return "match";
}

OverlapCategory overlap_category_from_string(std::string_view s) {
  for (auto c : {OverlapCategory::match, OverlapCategory::superset, OverlapCategory::subset,
                 OverlapCategory::null_overlap, OverlapCategory::partial_overlap}) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::usage_error, "unknown overlap category '" + std::string(s) + "'");
}

OverlapCategory overlap_category(const std::set<std::string>& real, const std::set<std::string>& synth) {
  if (real.empty()) throw Error(ErrorCode::usage_error, "real tag set is empty");
  if (real == synth) return OverlapCategory::match;
  std::size_t shared = 0;
  for (const auto& t : synth) shared += real.count(t);
  if (shared == 0) return OverlapCategory::null_overlap;
  if (shared == real.size()) return OverlapCategory::superset;
  if (shared == synth.size()) return OverlapCategory::subset;
  return OverlapCategory::partial_overlap;
}

BucketStats bucket_stats(const std::vector<double>& values) {
  BucketStats s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / static_cast<double>(s.n));
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  return s;
}

nlohmann::ordered_json SimilarityReport::to_json() const {
  nlohmann::ordered_json j;
  auto b = nlohmann::ordered_json::object();
  for (const auto& [kind, cats] : buckets) {
    auto k = nlohmann::ordered_json::object();
    for (const auto& [cat, s] : cats) {
      k[std::string(to_string(cat))] = {{"mean", s.mean}, {"std", s.std}, {"n", s.n}, {"min", s.min}, {"max", s.max}};
    }
    b[kind] = k;
  }
  j["buckets"] = b;
  j["pairs"] = pairs.size();
  j["skipped_samples"] = skipped_samples;
  j["replan_failures"] = replan_failures;
  return j;
}

std::string SimilarityReport::table() const {
  static const std::vector<OverlapCategory> cols = {OverlapCategory::match, OverlapCategory::superset,
                                                    OverlapCategory::subset, OverlapCategory::null_overlap,
                                                    OverlapCategory::partial_overlap};
  std::ostringstream o;
  o << fmt::format("{:<14}", "Entity");
  for (auto c : cols) o << fmt::format("  {:>16}", to_string(c));
  o << "\n";
  for (const auto& [kind, cats] : buckets) {
    o << fmt::format("{:<14}", kind);
    for (auto c : cols) {
      auto it = cats.find(c);
      std::string cell = it == cats.end() ? "-" : fmt::format("{:.2f}+/-{:.2f} ({})", it->second.mean, it->second.std,
                                                              it->second.n);
      o << fmt::format("  {:>16}", cell);
    }
    o << "\n";
  }
  return o.str();
}

namespace {

std::vector<std::string> to_vec(const std::set<std::string>& s) { return {s.begin(), s.end()}; }

bool renderable(const EntityKind& kind, const std::set<std::string>& tags) {
  if (tags.empty() || tags.size() > kMaxVariationsPerRender) return false;
  if (tags.count(std::string(kNotListed))) return tags.size() == 1;
  return combination_supported(kind, to_vec(tags));
}

// Tag set realizing the wanted category against the real tags, if one exists.
std::optional<std::set<std::string>> plan_tags(const EntityKind& kind, const std::set<std::string>& real,
                                               OverlapCategory want, const std::vector<std::string>& pool, Rng& rng) {
  std::vector<std::string> ids = pool;
  rng.shuffle(ids);
  switch (want) {
    case OverlapCategory::match:
      if (renderable(kind, real)) return real;
      return std::nullopt;
    case OverlapCategory::superset:
      if (real.count(std::string(kNotListed))) return std::nullopt;
      for (const auto& id : ids) {
        if (real.count(id)) continue;
        auto s = real;
        s.insert(id);
        if (renderable(kind, s)) return s;
      }
      return std::nullopt;
    case OverlapCategory::subset: {
      if (real.size() < 2) return std::nullopt;
      auto v = to_vec(real);
      rng.shuffle(v);
      for (const auto& drop : v) {
        auto s = real;
        s.erase(drop);
        if (renderable(kind, s)) return s;
      }
      return std::nullopt;
    }
    case OverlapCategory::null_overlap:
      for (const auto& id : ids) {
        if (!real.count(id) && renderable(kind, {id})) return std::set<std::string>{id};
      }
      return std::nullopt;
    case OverlapCategory::partial_overlap:
      for (const auto& keep : real) {
        for (const auto& id : ids) {
          if (real.count(id) || real.size() < 2) continue;
          std::set<std::string> s = {keep, id};
          if (renderable(kind, s)) return s;
        }
      }
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

SimilarityReport pair_and_score(const std::vector<LabeledSample>& real, EmbeddingBackend& embedder, ChatBackend* chat,
                                const SimilarityConfig& config, const VariationRegistry& registry) {
  SimilarityReport report;
  for (std::size_t i = 0; i < real.size(); ++i) {
    const auto& sample = real[i];
    const EntityValue& value = sample.transcript.value;
    const EntityKind& kind = value.kind;
    Rng rng(derive_seed(config.seed, "similarity:" + std::to_string(i)));
    std::vector<ScoredPair> mine;
    try {
      std::set<std::string> real_tags = classify(sample.transcript.text, kind, config.classify_mode, chat, registry);
      const auto pool = registry.ids_for(kind);
      for (auto want : config.targets) {
        auto tags = plan_tags(kind, real_tags, want, pool, rng);
        if (!tags) {
          ++report.replan_failures;
          continue;
        }
        std::vector<std::string> ids;
        if (!tags->count(std::string(kNotListed))) ids = to_vec(*tags);
        std::string synth;
        std::uint64_t seed = rng.next() % 1024;
        if (chat) {
          auto got = generate_transcripts(default_field_spec(kind), value, ids, {sample.transcript.text}, 1, *chat,
                                          config.retry, registry);
          if (got.empty()) {
            ++report.replan_failures;
            continue;
          }
          synth = got.front().text;
        } else {
          synth = render({value, ids, seed});
          if (synth == sample.transcript.text) synth = render({value, ids, seed + 1});
        }
        ScoredPair p;
        p.sample_index = i;
        p.kind = kind.tag();
        p.real_text = sample.transcript.text;
        p.synth_text = synth;
        p.real_tags = real_tags;
        p.synth_tags = *tags;
        p.category = overlap_category(real_tags, *tags);
        mine.push_back(std::move(p));
      }
      if (mine.empty()) continue;
      std::vector<std::string> texts = {sample.transcript.text};
      for (const auto& p : mine) texts.push_back(p.synth_text);
      auto vecs = embed(embedder, texts);
      for (std::size_t k = 0; k < mine.size(); ++k) mine[k].cosine = cosine(vecs[0], vecs[k + 1]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::provider_error && e.code() != ErrorCode::malformed_output) throw;
      ++report.skipped_samples;
      continue;
    }
    for (auto& p : mine) report.pairs.push_back(std::move(p));
  }
  std::map<std::string, std::map<OverlapCategory, std::vector<double>>> grouped;
  for (const auto& p : report.pairs) grouped[p.kind][p.category].push_back(p.cosine);
  for (const auto& [kind, cats] : grouped) {
    for (const auto& [cat, v] : cats) report.buckets[kind][cat] = bucket_stats(v);
  }
  return report;
}

}  // namespace lingvar
