#include <algorithm>
#include <cctype>
#include <set>

#include "lingvar/error.hpp"
#include "lingvar/lexicon.hpp"
#include "lingvar/prompts.hpp"
#include "lingvar/providers.hpp"
#include "lingvar/renderer.hpp"
#include "lingvar/rng.hpp"
#include "lingvar/spoken_parser.hpp"
#include "lingvar/taxonomy.hpp"
#include "lingvar/text.hpp"

namespace lingvar {
namespace {

using Fields = std::map<std::string, std::string>;

std::string get(const Fields& f, const std::string& key) {
  auto it = f.find(key);
  if (it == f.end()) throw Error(ErrorCode::provider_error, "mock: prompt lacks \"" + key + "\"");
  return it->second;
}

std::string unquote(const std::string& s) {
  try {
    auto j = nlohmann::json::parse(s);
    if (j.is_string()) return j.get<std::string>();
  } catch (const nlohmann::json::exception&) {
  }
  return s;
}

std::size_t count_field(const Fields& f, const std::string& key) {
  try {
    return static_cast<std::size_t>(std::stoul(get(f, key)));
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::provider_error, "mock: bad \"" + key + "\"");
  }
}


std::string mock_values(const Fields& f, Rng& rng) {
  const EntityKind kind = EntityKind::from_tag(get(f, "Entity Type"));
  const std::size_t n = count_field(f, "Number of Values");
  std::vector<std::string> values;
  std::set<std::string> seen;
  for (std::size_t tries = 0; values.size() < n && tries < n * 50 + 100; ++tries) {
    std::string v;
    switch (kind.builtin()) {
      case EntityKind::Builtin::zip_code: {
        std::string s = std::to_string(rng.range(1001, 99950));
        v = std::string(5 - s.size(), '0') + s;
        break;
      }
      case EntityKind::Builtin::date_of_birth: {
        CalendarDate d{rng.range(1940, 2005), rng.range(1, 12), rng.range(1, 31)};
        if (!is_valid_date(d)) continue;
        v = format_date(d);
        break;
      }
      case EntityKind::Builtin::person_name: {
        const auto& pool = lexicon::given_names();
        v = std::string(pool[rng.index(pool.size())].name);
        break;
      }
      case EntityKind::Builtin::extension:
        return R"({"values":[]})";
    }
    if (seen.insert(v).second) values.push_back(v);
  }
  return nlohmann::json{{"values", values}}.dump();
}

std::string mock_transcripts(const Fields& f) {
  const EntityKind kind = EntityKind::from_tag(get(f, "Entity Type"));
  const EntityValue value = EntityValue::from_raw(kind, get(f, "Target Value"));
  const std::size_t n = count_field(f, "Number of Transcripts");
  std::set<std::string> taken;
  try {
    for (const auto& e : nlohmann::json::parse(get(f, "Existing Transcripts"))) taken.insert(e.get<std::string>());
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::provider_error, "mock: bad existing transcripts");
  }
  const auto known = VariationRegistry::builtin().ids_for(kind);
  std::vector<std::string> ids;
  auto listed = f.find("Variation Types");
  if (listed != f.end()) {
    for (auto& id : text::split(listed->second, ',')) {
      std::string t(text::trim(id));
      if (std::find(known.begin(), known.end(), t) != known.end() &&
          std::find(ids.begin(), ids.end(), t) == ids.end()) {
        ids.push_back(t);
      }
    }
  }
  if (ids.size() > kMaxVariationsPerRender) ids.resize(kMaxVariationsPerRender);
  if (!combination_supported(kind, ids)) ids.resize(1);

  nlohmann::json out = nlohmann::json::array();
  for (std::uint64_t seed = 0; out.size() < n && seed < 64 + n * 8; ++seed) {
    std::string text = render({value, ids, seed});
    if (!taken.insert(text).second) continue;
    nlohmann::json tags = ids.empty() ? nlohmann::json::array({std::string(kNotListed)}) : nlohmann::json(ids);
    out.push_back({{"transcript", text}, {"variation_types", tags}});
  }
  return nlohmann::json{{"transcripts", out}}.dump();
}

std::string mock_validate(const Fields& f) {
  const EntityKind kind = EntityKind::from_tag(get(f, "Entity Type"));
  const std::string transcript = unquote(get(f, "Transcript"));
  auto got = extract(kind, transcript);
  bool ok = got && values_equivalent(kind, got->canonical, get(f, "Ground Truth"));
  return ok ? "true" : "false";
}

std::string mock_classify(const Fields& f, const VariationRegistry& registry) {
  const EntityKind kind = EntityKind::from_tag(get(f, "Entity Type"));
  auto tags = classify_rule(unquote(get(f, "Transcript")), kind, registry);
  return nlohmann::json(std::vector<std::string>(tags.begin(), tags.end())).dump();
}

struct Rule {
  bool ParseOptions::*flag;
  const char* keyword;
  const char* guidance;
};

const std::vector<Rule>& rules() {
  static const std::vector<Rule> r = {
      {&ParseOptions::resolve_corrections, "correct",
       "- If the speaker corrects themselves, use the corrected value"},
      {&ParseOptions::collapse_repetitions, "repeat", "- If a group of digits is repeated, count it once"},
      {&ParseOptions::honor_reversal_cues, "reverse",
       "- If the speaker says the digits in reverse, put them back in order"},
      {&ParseOptions::oh_as_zero, "\"oh\"", "- Treat the spoken word \"oh\" as the digit zero"},
      {&ParseOptions::expand_multipliers, "double", "- Expand \"double\" and \"triple\" into that many copies of the digit"},
      {&ParseOptions::map_nicknames, "nickname", "- Map a nickname to the formal first name"},
  };
  return r;
}

// The mock follows only the interpretation rules its instruction spells out.
ParseOptions options_for(std::string_view instruction) {
  std::string lower = text::to_lower(instruction);
  ParseOptions o;
  for (const auto& r : rules()) o.*(r.flag) = lower.find(r.keyword) != std::string::npos;
  return o;
}

std::string mock_extract(const ChatRequest& req, const Fields& f) {
  const EntityKind kind = EntityKind::from_tag(get(f, "Entity Type"));
  auto got = extract(kind, unquote(get(f, "Transcript")), options_for(req.system_text));
  return got ? got->canonical : "";
}

std::string mock_mutate(const Fields& f, Rng& rng) {
  const EntityKind kind = EntityKind::from_tag(get(f, "Entity Type"));
  std::string instruction = unquote(get(f, "Current Instruction"));
  while (!instruction.empty() && std::isspace(static_cast<unsigned char>(instruction.back()))) instruction.pop_back();
  const std::size_t n = std::max<std::size_t>(1, count_field(f, "Number of Candidates"));
  nlohmann::json failures;
  try {
    failures = nlohmann::json::parse(get(f, "Failures"));
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::provider_error, "mock: bad failures");
  }
  const ParseOptions current = options_for(instruction);
  std::vector<std::pair<int, std::size_t>> votes;  // (fixed failures, rule index)
  for (std::size_t i = 0; i < rules().size(); ++i) {
    if (current.*(rules()[i].flag)) continue;
    ParseOptions with = current;
    with.*(rules()[i].flag) = true;
    int fixed = 0;
    for (const auto& c : failures) {
      std::string t = c.value("transcript", "");
      auto before = extract(kind, t, current);
      auto after = extract(kind, t, with);
      if ((before ? before->canonical : "") != (after ? after->canonical : "")) ++fixed;
    }
    if (fixed > 0) votes.emplace_back(fixed, i);
  }
  std::stable_sort(votes.begin(), votes.end(), [](auto& a, auto& b) { return a.first > b.first; });

  std::vector<std::string> out;
  auto push = [&](const std::string& s) {
    if (std::find(out.begin(), out.end(), s) == out.end() && out.size() < n) out.push_back(s);
  };
  std::string all = instruction;
  for (const auto& [fixed, i] : votes) {
    push(instruction + "\n" + rules()[i].guidance);
    all += "\n" + std::string(rules()[i].guidance);
  }
  if (votes.size() > 1) push(all);
  static const std::vector<std::string> rephrasings = {
      "- Read the whole transcript before answering", "- Ignore filler words and hesitations",
      "- Answer with the value only", "- Prefer the last complete statement of the value"};
  std::vector<std::string> extra = rephrasings;
  rng.shuffle(extra);
  for (const auto& e : extra) {
    if (instruction.find(e) == std::string::npos) push(instruction + "\n" + e);
  }
  return nlohmann::json{{"instructions", out}}.dump();
}

}  // namespace

MockChatBackend::MockChatBackend(std::uint64_t seed) : seed_(seed), registry_(&VariationRegistry::builtin()) {}
MockChatBackend::MockChatBackend(std::uint64_t seed, const VariationRegistry& registry)
    : seed_(seed), registry_(&registry) {}

std::string MockChatBackend::complete(const ChatRequest& request) {
  const Fields f = prompt_fields(request.user_text);
  const std::string task = get(f, "Task ID");
  Rng rng(derive_seed(seed_, request.system_text + "\n" + request.user_text));
  if (task == "generate_values") return mock_values(f, rng);
  if (task == "generate_transcripts") return mock_transcripts(f);
  if (task == "validate") return mock_validate(f);
  if (task == "classify") return mock_classify(f, *registry_);
  if (task == "extract") return mock_extract(request, f);
  if (task == "mutate_instruction") return mock_mutate(f, rng);
  throw Error(ErrorCode::provider_error, "mock: unknown task '" + task + "'");
}

std::vector<EmbeddingVector> MockEmbeddingBackend::embed_batch(const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    EmbeddingVector v(dimension_, 0.0);
    v[text::fnv1a64("<s>") % dimension_] += 1.0;
    std::string word;
    auto flush = [&] {
      if (!word.empty()) v[text::fnv1a64(word) % dimension_] += 1.0;
      word.clear();
    };
    for (char c : text::to_lower(t)) {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'' || (c & 0x80)) {
        word += c;
      } else {
        flush();
      }
    }
    flush();
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace lingvar
