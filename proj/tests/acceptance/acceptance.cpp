// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lingvar/error.hpp"
#include "lingvar/evaluator.hpp"
#include "lingvar/generation.hpp"
#include "lingvar/lexicon.hpp"
#include "lingvar/optimizer.hpp"
#include "lingvar/providers.hpp"
#include "lingvar/renderer.hpp"
#include "lingvar/rng.hpp"
#include "lingvar/similarity.hpp"
#include "lingvar/spoken_parser.hpp"
#include "lingvar/taxonomy.hpp"
#include "lingvar/text.hpp"
#include "lingvar/validation.hpp"

using namespace lingvar;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and sizes.
constexpr int kValuesPerPair = 20;
constexpr double kRoundTripSeconds = 10.0;
constexpr std::size_t kMinPaperExamples = 30;
constexpr int kMetricTrials = 1000;
constexpr double kF1Tolerance = 1e-12;
constexpr int kRandomSplitSizes = 100;
constexpr int kBalanceSeeds = 20;
constexpr std::size_t kBalanceValues = 5;
constexpr std::size_t kBalanceTarget = 3;
constexpr std::size_t kBalanceSpread = 1;
constexpr int kOptimizerSeeds = 20;
constexpr std::size_t kOptimizerIterations = 5;
constexpr double kOptimizerGoal = 0.9;
constexpr int kCosineVectors = 1000;
constexpr double kCosineTolerance = 1e-9;
constexpr std::size_t kSimilarityPairs = 200;
constexpr int kFuzzCases = 10000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << ": " << o.detail << std::endl;
  if (!o.pass) ++failures;
}

std::string fmt_double(double v, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

std::string pad5(int v) {
  std::string s = std::to_string(v);
  return std::string(5 - s.size(), '0') + s;
}

std::string mmddyyyy(int y, int m, int d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d-%02d-%04d", m, d, y);
  return buf;
}

bool real_date(int y, int m, int d) {
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12 || d < 1) return false;
  int limit = days[m - 1];
  if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) limit = 29;
  return d <= limit;
}

std::vector<EntityValue> seeded_values(const EntityKind& kind, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::set<std::string> seen;
  std::vector<EntityValue> out;
  while (out.size() < n) {
    std::string raw;
    switch (kind.builtin()) {
      case EntityKind::Builtin::zip_code:
        raw = pad5(static_cast<int>(g() % 99999) + 1);
        break;
      case EntityKind::Builtin::date_of_birth: {
        int y = 1930 + static_cast<int>(g() % 90), m = 1 + static_cast<int>(g() % 12), d = 1 + static_cast<int>(g() % 31);
        if (!real_date(y, m, d)) continue;
        raw = mmddyyyy(y, m, d);
        break;
      }
      default: {
        const auto& pool = lexicon::given_names();
        raw = std::string(pool[g() % pool.size()].name);
        break;
      }
    }
    if (seen.insert(raw).second) out.push_back(EntityValue::from_raw(kind, raw));
  }
  return out;
}

const std::vector<EntityKind>& kinds() {
  static const std::vector<EntityKind> k = {EntityKind::zip_code(), EntityKind::date_of_birth(),
                                            EntityKind::person_name()};
  return k;
}

// ---------------------------------------------------------------- 1

Outcome round_trip() {
  auto start = std::chrono::steady_clock::now();
  std::size_t cases = 0, ok = 0;
  std::vector<std::string> counts;
  std::string first_failure;
  for (const auto& kind : kinds()) {
    auto ids = VariationRegistry::builtin().ids_for(kind);
    counts.push_back(std::to_string(ids.size()));
    auto values = seeded_values(kind, kValuesPerPair, text::fnv1a64(kind.tag()));
    for (const auto& id : ids) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        ++cases;
        std::string t;
        try {
          t = render({values[i], {id}, i});
        } catch (const std::exception& e) {
          if (first_failure.empty()) first_failure = id + " " + values[i].canonical + ": " + e.what();
          continue;
        }
        auto got = extract(kind, t);
        if (got && values_equivalent(kind, got->canonical, values[i].canonical)) {
          ++ok;
        } else if (first_failure.empty()) {
          first_failure = id + " '" + t + "' -> " + (got ? got->canonical : "none") + " != " + values[i].canonical;
        }
      }
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.pass = ok == cases && cases == (35 + 29 + 29) * static_cast<std::size_t>(kValuesPerPair) && secs < kRoundTripSeconds;
  o.detail = std::to_string(ok) + "/" + std::to_string(cases) + " ids " + counts[0] + "+" + counts[1] + "+" +
             counts[2] + " in " + fmt_double(secs, 3) + "s (limit " + fmt_double(kRoundTripSeconds) + "s)";
  if (!first_failure.empty()) o.detail += "; first failure: " + first_failure;
  return o;
}

// ---------------------------------------------------------------- 2

struct PaperCase {
  std::string what;  // "extract", "digits", "validate"
  EntityKind kind;
  std::string text;
  std::string expected;  // canonical value, digit string, or "true"/"false" + value
  std::string truth;     // validate only
};

Outcome reference_examples() {
  const auto zip = EntityKind::zip_code();
  const auto dob = EntityKind::date_of_birth();
  const auto name = EntityKind::person_name();
  const std::vector<PaperCase> cases = {
      // Example dataset table and extraction guidelines.
      {"extract", zip, "It is nine double one oh one", "91101", ""},
      {"extract", zip, "nine double one oh one", "91101", ""},
      {"extract", zip, "one two three four five", "12345", ""},
      {"extract", name, "It is John.", "John", ""},
      // Validation prompt.
      {"validate", zip, "My zip is one two three four five", "true", "12345"},
      {"validate", zip, "I don't know", "false", "12345"},
      {"validate", zip, "seven oh ... no, nine oh two one oh", "true", "90210"},
      {"validate", dob, "01152024", "true", "01-15-2024"},
      {"validate", dob, "11524", "true", "01-15-2024"},
      {"validate", dob, "zero one one five two zero two four", "true", "01-15-2024"},
      // General variation table.
      {"extract", zip, "um, it's one two three four five", "12345", ""},
      {"digits", zip, "it's... one... two... three...", "123", ""},
      {"digits", zip, "one two three... no wait, four five", "1245", ""},
      {"extract", zip, "one two three, one two three, four five", "12345", ""},
      {"extract", zip, "one two, pause, three four five", "12345", ""},
      {"extract", zip, "the number is one two three four five", "12345", ""},
      {"extract", zip, "it's one two three four five", "12345", ""},
      {"extract", zip, "please, it's one two three four five", "12345", ""},
      {"extract", zip, "definitely one two three four five", "12345", ""},
      {"extract", zip, "I think it's one two three four five", "12345", ""},
      {"extract", zip, "onetwothreefourfive", "12345", ""},
      {"extract", zip, "carefully, one two three four five", "12345", ""},
      {"extract", zip, "one two three four five, is that right?", "12345", ""},
      {"extract", zip, "one two three four five, does that make sense?", "12345", ""},
      {"extract", zip, "yes, one two three four five", "12345", ""},
      {"extract", zip, "confirmed, one two three four five", "12345", ""},
      // ZIP table.
      {"extract", zip, "twelve thirty-four five", "12345", ""},
      {"extract", zip, "one twenty-three forty-five", "12345", ""},
      {"extract", zip, "three hundred two five", "30025", ""},
      {"extract", zip, "twelve three four five", "12345", ""},
      {"digits", zip, "thirty two five eight", "3258", ""},
      {"digits", zip, "five four three two one", "54321", ""},
      {"extract", zip, "one two... three four... five", "12345", ""},
      {"extract", zip, "one two, one two, three four five", "12345", ""},
      {"extract", zip, "one... two... three... four... five", "12345", ""},
      {"extract", zip, "um, one two three, you know, four five", "12345", ""},
      {"extract", zip, "the digits are one two three four five", "12345", ""},
      {"extract", zip, "yeah, it's one two three four five", "12345", ""},
      {"extract", zip, "one-two-three-four-five", "12345", ""},
      // DOB table.
      {"extract", dob, "1267", "01-02-1967", ""},
      {"extract", dob, "one two six seven", "01-02-1967", ""},
      {"extract", dob, "32584", "03-25-1984", ""},
      {"extract", dob, "five one seven eight two", "05-17-1982", ""},
      {"extract", dob, "120285", "12-02-1985", ""},
      {"extract", dob, "one two zero two eight five", "12-02-1985", ""},
      {"extract", dob, "12021947", "12-02-1947", ""},
      {"extract", dob, "one two zero two one nine four seven", "12-02-1947", ""},
      {"extract", dob, "January second, nineteen ninety", "01-02-1990", ""},
      {"extract", dob, "January zero two, nineteen ninety", "01-02-1990", ""},
      {"extract", dob, "uh, zero one zero two one nine nine zero", "01-02-1990", ""},
      {"extract", dob, "please, one five, eighty five", "01-05-1985", ""},
      // Name table.
      {"extract", name, "John Smith", "John", ""},
      {"extract", name, "My name is John Smith", "John", ""},
      {"extract", name, "Smith, John", "John", ""},
      {"extract", name, "Mr. John Smith", "John", ""},
      {"extract", name, "John Michael Smith", "John", ""},
      {"extract", name, "John Smith Jr.", "John", ""},
      {"extract", name, "J. M. Smith", "John", ""},
      {"extract", name, "James—no, I mean John Smith", "John", ""},
      {"extract", name, "John, that’s J-O-H-N Smith", "John", ""},
      {"extract", name, "O'Connor, John", "John", ""},
      {"extract", name, "John Smith-Jones", "John", ""},
      {"extract", name, "Johnny", "John", ""},
  };
  std::size_t ok = 0;
  std::vector<std::string> failed;
  for (const auto& c : cases) {
    std::string got;
    if (c.what == "digits") {
      got = parse_number_words(c.text);
    } else if (c.what == "validate") {
      auto truth = EntityValue::from_raw(c.kind, c.truth);
      got = validate(c.text, truth, default_field_spec(c.kind), ValidationMode::oracle).valid ? "true" : "false";
    } else {
      auto v = extract(c.kind, c.text);
      got = v ? v->canonical : "none";
    }
    if (got == c.expected) {
      ++ok;
    } else {
      failed.push_back("'" + c.text + "' -> " + got + " (expected " + c.expected + ")");
    }
  }
  Outcome o;
  o.pass = failed.empty() && cases.size() >= kMinPaperExamples;
  o.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) + " examples";
  for (const auto& f : failed) o.detail += "; " + f;
  return o;
}

// ---------------------------------------------------------------- 3

Outcome metrics() {
  std::mt19937_64 g(3);
  const auto zip = EntityKind::zip_code();
  int mismatches = 0;
  for (int trial = 0; trial < kMetricTrials; ++trial) {
    std::size_t n = g() % 60;
    std::vector<Prediction> preds;
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::string gold = pad5(static_cast<int>(g() % 99999) + 1);
      Prediction p{std::nullopt, EntityValue::from_raw(zip, gold)};
      switch (g() % 4) {
        case 0: ++fn; break;
        case 1: p.predicted = ""; ++fn; break;
        case 2: p.predicted = gold; ++tp; break;
        default: {
          std::string wrong = gold;
          wrong[g() % 5] = static_cast<char>('0' + (wrong[0] - '0' + 1 + g() % 9) % 10);
          if (wrong == gold) wrong[0] = gold[0] == '9' ? '0' : static_cast<char>(gold[0] + 1);
          p.predicted = wrong;
          ++fp;
        }
      }
      preds.push_back(p);
    }
    double P = tp + fp ? double(tp) / double(tp + fp) : 0.0;
    double R = tp + fn ? double(tp) / double(tp + fn) : 0.0;
    double F = P + R > 0 ? 2 * P * R / (P + R) : 0.0;
    double A = n ? double(tp) / double(n) : 0.0;
    Metrics m = score(preds);
    if (long(m.tp) != tp || long(m.fp) != fp || long(m.fn) != fn || std::fabs(m.precision - P) > kF1Tolerance ||
        std::fabs(m.recall - R) > kF1Tolerance || std::fabs(m.f1 - F) > kF1Tolerance ||
        std::fabs(m.accuracy - A) > kF1Tolerance) {
      ++mismatches;
    }
  }
  Metrics spot = Metrics::from_counts(1, 1, 0);
  Metrics zero = Metrics::from_counts(0, 0, 0);
  bool spot_ok = std::fabs(spot.f1 - 2.0 / 3.0) <= kF1Tolerance && zero.f1 == 0.0 && zero.precision == 0.0;
  Outcome o;
  o.pass = mismatches == 0 && spot_ok;
  o.detail = std::to_string(kMetricTrials - mismatches) + "/" + std::to_string(kMetricTrials) +
             " trials match recount; F1(1,1,0)=" + fmt_double(spot.f1, 17) + " (tol " + fmt_double(kF1Tolerance) + ")";
  return o;
}

// ---------------------------------------------------------------- 4

Outcome split_contract() {
  const SplitRatios r{0.7, 0.15, 0.15};
  Outcome o;
  auto a = split_sizes(1055, r);
  auto b = split_sizes(5635, r);
  bool row1 = a == std::array<std::size_t, 3>{739, 158, 158};
  // The reference 5635 row is 3944/845/846, which no single rounding rule
  // reproduces together with the 1055 row; the floor rule yields 3945/845/845.
  const std::array<std::size_t, 3> reference{3944, 845, 846};
  long diff = 0;
  for (int i = 0; i < 3; ++i) diff = std::max(diff, std::labs(long(b[i]) - long(reference[i])));
  bool row2 = b[0] + b[1] + b[2] == 5635 && diff <= 1;

  std::mt19937_64 g(4);
  int bad = 0;
  std::string first;
  for (int t = 0; t < kRandomSplitSizes; ++t) {
    std::size_t n = 1 + g() % 2000;
    std::vector<LabeledSample> samples(n);
    std::size_t values = 1 + g() % std::max<std::size_t>(1, n / 3);
    for (std::size_t i = 0; i < n; ++i) {
      samples[i].transcript.text = "t" + std::to_string(i);
      samples[i].transcript.value = EntityValue::from_raw(EntityKind::zip_code(), pad5(int(1 + g() % values)));
    }
    std::uint64_t seed = g();
    auto s1 = split(samples, r, seed);
    auto s2 = split(samples, r, seed);
    std::array<std::size_t, 3> got{0, 0, 0};
    bool ok = s1.size() == n;
    std::map<std::string, std::set<Split>> per_value;
    for (std::size_t i = 0; ok && i < n; ++i) {
      ok = s1[i].split.has_value() && s2[i].split == s1[i].split && s1[i].transcript.text == samples[i].transcript.text;
      if (!ok) break;
      ++got[static_cast<int>(*s1[i].split)];
      per_value[s1[i].transcript.value.canonical].insert(*s1[i].split);
    }
    std::array<std::size_t, 3> want{n - (15 * n) / 100 * 2, (15 * n) / 100, (15 * n) / 100};
    ok = ok && got == want;
    for (const auto& [v, splits] : per_value) {
      if (splits == std::set<Split>{Split::test}) ok = false;
    }
    if (!ok) {
      ++bad;
      if (first.empty()) first = "n=" + std::to_string(n);
    }
  }
  o.pass = row1 && row2 && bad == 0;
  o.detail = "1055 -> " + std::to_string(a[0]) + "/" + std::to_string(a[1]) + "/" + std::to_string(a[2]) +
             "; 5635 -> " + std::to_string(b[0]) + "/" + std::to_string(b[1]) + "/" + std::to_string(b[2]) +
             " (reference 3944/845/846, max row difference " + std::to_string(diff) + ", floor rule kept)" +
             "; partition properties " + std::to_string(kRandomSplitSizes - bad) + "/" +
             std::to_string(kRandomSplitSizes) + " sizes";
  if (!first.empty()) o.detail += "; first failure " + first;
  return o;
}

// ---------------------------------------------------------------- 5

Outcome balance() {
  std::size_t worst_spread = 0, unvalidated = 0, runs = 0;
  std::string first;
  for (const auto& kind : kinds()) {
    const auto ids = VariationRegistry::builtin().ids_for(kind);
    for (int seed = 0; seed < kBalanceSeeds; ++seed) {
      GenerationConfig cfg;
      cfg.spec = default_field_spec(kind);
      cfg.num_values = kBalanceValues;
      cfg.target_per_pair = kBalanceTarget;
      cfg.seed = static_cast<std::uint64_t>(seed);
      cfg.retry = {std::chrono::milliseconds(0), std::chrono::milliseconds(0)};
      MockChatBackend provider(derive_seed(cfg.seed, "provider"));
      Validator validator(cfg.spec);
      auto result = run_pipeline(cfg, provider, validator);
      ++runs;
      std::set<std::string> values;
      for (const auto& s : result.samples) values.insert(s.transcript.value.canonical);
      std::map<std::pair<std::string, std::string>, std::size_t> counts;
      for (const auto& v : values) {
        for (const auto& id : ids) counts[{v, id}] = 0;
      }
      for (const auto& s : result.samples) {
        auto got = extract(kind, s.transcript.text);
        if (!s.validated || !got || !values_equivalent(kind, got->canonical, s.transcript.value.canonical)) {
          ++unvalidated;
        }
        for (const auto& t : s.transcript.variation_tags) {
          auto it = counts.find({s.transcript.value.canonical, t});
          if (it != counts.end()) ++it->second;
        }
      }
      std::size_t lo = SIZE_MAX, hi = 0;
      for (const auto& [k, n] : counts) {
        lo = std::min(lo, n);
        hi = std::max(hi, n);
      }
      std::size_t spread = counts.empty() || values.size() != kBalanceValues ? SIZE_MAX : hi - lo;
      if (lo < kBalanceTarget) spread = std::max(spread, kBalanceTarget - lo + kBalanceSpread);
      worst_spread = std::max(worst_spread, spread);
      if (spread > kBalanceSpread && first.empty()) {
        first = kind.tag() + " seed " + std::to_string(seed) + " min " + std::to_string(lo) + " max " +
                std::to_string(hi);
      }
    }
  }
  Outcome o;
  o.pass = worst_spread <= kBalanceSpread && unvalidated == 0;
  o.detail = std::to_string(runs) + " runs, worst max-min " + std::to_string(worst_spread) + " (limit " +
             std::to_string(kBalanceSpread) + "), unvalidated " + std::to_string(unvalidated);
  if (!first.empty()) o.detail += "; first failure " + first;
  return o;
}

// ---------------------------------------------------------------- 6

// Keyword landscape: an instruction mentioning "digits" gets 9 in 10 samples
// right, anything else 1 in 2.
std::optional<std::string> keyword_extractor(const std::string& instruction, const LabeledSample& s) {
  const int k = std::stoi(s.transcript.text.substr(s.transcript.text.rfind(' ') + 1));
  const bool right = instruction.find("digits") != std::string::npos ? k % 10 != 0 : k % 2 != 0;
  if (right) return s.transcript.value.canonical;
  return std::string("00000");
}

std::vector<std::string> appending_mutator(const std::string& instruction, const std::vector<FailureCase>& failures,
                                           std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < count && !failures.empty(); ++j) {
    auto words = text::split_whitespace(failures[j % failures.size()].transcript);
    const auto& w = words[(j + instruction.size()) % words.size()];
    out.push_back(instruction + " " + w);
  }
  return out;
}

std::vector<LabeledSample> landscape_samples(std::size_t n, std::size_t offset) {
  static const std::vector<std::string> lead = {"please read", "say the", "read me the", "the", "give all"};
  std::vector<LabeledSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].transcript.text = lead[i % lead.size()] + " digits of item " + std::to_string(i + offset);
    out[i].transcript.value = EntityValue::from_raw(EntityKind::zip_code(), pad5(int(10001 + i + offset)));
  }
  return out;
}

Outcome optimizer() {
  auto train = landscape_samples(40, 0);
  auto valid = landscape_samples(20, 1000);
  int reached = 0, monotone = 0;
  for (int seed = 0; seed < kOptimizerSeeds; ++seed) {
    OptimizerConfig c;
    c.seed = static_cast<std::uint64_t>(seed);
    c.iterations = kOptimizerIterations;
    c.batch_size = 8;
    auto r = optimize("Extract the value.", train, valid, keyword_extractor, appending_mutator, c);
    bool mono = true;
    for (std::size_t i = 1; i < r.running_best.size(); ++i) mono = mono && r.running_best[i] >= r.running_best[i - 1];
    monotone += mono;
    bool hit = false;
    for (std::size_t i = 0; i < r.running_best.size() && i <= kOptimizerIterations; ++i) {
      hit = hit || r.running_best[i] >= kOptimizerGoal - 1e-12;
    }
    reached += hit;
  }
  OptimizerConfig zero;
  zero.mutation_count = 0;
  auto r0 = optimize("Extract the value.", train, valid, keyword_extractor, appending_mutator, zero);
  bool base_kept = r0.best.instruction == "Extract the value." && r0.candidates.size() == 1;
  Outcome o;
  o.pass = reached == kOptimizerSeeds && monotone == kOptimizerSeeds && base_kept;
  o.detail = "reached " + fmt_double(kOptimizerGoal) + " in " + std::to_string(reached) + "/" +
             std::to_string(kOptimizerSeeds) + " seeds, non-decreasing " + std::to_string(monotone) + "/" +
             std::to_string(kOptimizerSeeds) + ", mutation_count=0 keeps base: " + (base_kept ? "yes" : "no");
  return o;
}

// ---------------------------------------------------------------- 7

double naive_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += (long double)a[i] * b[i];
    na += (long double)a[i] * a[i];
    nb += (long double)b[i] * b[i];
  }
  return static_cast<double>(dot / std::sqrt(na * nb));
}

Outcome cosine_properties() {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.001, 1000.0);
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < kCosineVectors; ++t) {
    std::size_t d = 2 + g() % 63;
    std::vector<double> a(d), b(d);
    for (auto& x : a) x = u(g);
    for (auto& x : b) x = u(g);
    std::vector<double> ka = a;
    const double k = scale(g);
    for (auto& x : ka) x *= k;
    double ab = cosine(a, b), ba = cosine(b, a), kab = cosine(ka, b), aa = cosine(a, a);
    double err = std::max({std::fabs(ab - ba), std::fabs(kab - ab), std::fabs(aa - 1.0), std::fabs(ab - naive_cosine(a, b))});
    worst = std::max(worst, err);
    if (err > kCosineTolerance) ++bad;
  }

  // Renderer corpus paired through the hashed embedding stub.
  std::vector<LabeledSample> real;
  std::size_t i = 0;
  for (const auto& kind : kinds()) {
    auto ids = VariationRegistry::builtin().ids_for(kind);
    auto values = seeded_values(kind, 30, 77 + i);
    for (std::size_t j = 0; j < values.size(); ++j, ++i) {
      LabeledSample s;
      const std::string& id = ids[(j * 7) % ids.size()];
      s.transcript = {render({values[j], {id}, j}), {id}, values[j], Provenance::real};
      real.push_back(s);
    }
  }
  MockEmbeddingBackend embedder;
  SimilarityConfig cfg;
  cfg.seed = 7;
  auto rep = pair_and_score(real, embedder, nullptr, cfg);
  double match = 0, null = 0;
  std::size_t nm = 0, nn = 0;
  for (const auto& p : rep.pairs) {
    if (p.category == OverlapCategory::match) {
      match += p.cosine;
      ++nm;
    } else if (p.category == OverlapCategory::null_overlap) {
      null += p.cosine;
      ++nn;
    }
  }
  double mean_match = nm ? match / double(nm) : 0.0, mean_null = nn ? null / double(nn) : 0.0;
  Outcome o;
  o.pass = bad == 0 && rep.pairs.size() >= kSimilarityPairs && nm > 0 && nn > 0 && mean_match >= mean_null;
  o.detail = std::to_string(kCosineVectors - bad) + "/" + std::to_string(kCosineVectors) +
             " vectors within " + fmt_double(kCosineTolerance) + " (worst " + fmt_double(worst, 3) + "); " +
             std::to_string(rep.pairs.size()) + " pairs, mean(match)=" + fmt_double(mean_match, 4) + " (n=" +
             std::to_string(nm) + ") mean(null_overlap)=" + fmt_double(mean_null, 4) + " (n=" + std::to_string(nn) + ")";
  return o;
}

// ---------------------------------------------------------------- 8

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  fs::path root = fs::temp_directory_path() / ("lingvar_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  // A live profile pointing at a closed local port: mock mode must never touch it.
  {
    std::ofstream cfg(root / "offline.toml");
    cfg << "seed = 11\nprofile = \"unreachable\"\n\n[providers.unreachable]\nbackend = \"openai\"\n"
           "endpoint = \"http://127.0.0.1:9\"\nmodel = \"none\"\ncredential_env = \"LINGVAR_UNSET_KEY\"\n";
  }
  std::vector<std::string> outputs;
  bool ran = true;
  for (const char* kind : {"zip_code", "date_of_birth", "person_name"}) {
    for (int run = 0; run < 2; ++run) {
      fs::path out = root / (std::string(kind) + std::to_string(run));
      std::string cmd = std::string("\"") + LINGVAR_CLI_PATH + "\" pipeline --mode mock --seed 42 --kind " + kind +
                        " --config \"" + (root / "offline.toml").string() + "\" --out \"" + out.string() +
                        "\" 2>/dev/null";
      ran = ran && std::system(cmd.c_str()) == 0;
      outputs.push_back(slurp(out / "dataset.jsonl"));
    }
  }
  bool same = true;
  std::size_t bytes = 0;
  for (std::size_t i = 0; i < outputs.size(); i += 2) {
    same = same && !outputs[i].empty() && outputs[i] == outputs[i + 1];
    bytes += outputs[i].size();
  }
  fs::remove_all(root);
  Outcome o;
  o.pass = ran && same;
  o.detail = std::string("3 kinds x 2 runs, byte-identical: ") + (same ? "yes" : "no") + ", " +
             std::to_string(bytes) + " bytes per run set, exit status " + (ran ? "0" : "non-zero");
  return o;
}

// ---------------------------------------------------------------- 9

class ScriptedBackend : public ChatBackend {
 public:
  explicit ScriptedBackend(std::string reply) : reply_(std::move(reply)) {}
  std::string complete(const ChatRequest&) override { return reply_; }
  std::string model_id() const override { return "scripted"; }

 private:
  std::string reply_;
};

std::string fuzz_case(std::mt19937_64& g) {
  static const std::vector<std::string> words = {
      "one", "two", "oh", "double", "triple", "hundred", "thousand", "twenty-", "-five", "no", "wait", "I mean",
      "sorry", "January", "second", "nineteen", "...", ",", "-", "'", "Mr.", "J-O-H-N", "Smith", "Jr.", "O'Connor",
      "backwards", "zero", "ninety", "twelve", "thirty-first", "\xe2\x80\x94", "\xc3\xa9", "\xf0\x9f\x98\x80", "  ",
      "\t", "\n", "um", "my name is", "1", "12", "123456789", "0000", "2nd", "\xff", "\xc3", "\xe2\x80"};
  std::string s;
  std::size_t n = g() % 24;
  for (std::size_t i = 0; i < n; ++i) {
    switch (g() % 4) {
      case 0: {
        std::size_t m = 1 + g() % 6;
        for (std::size_t k = 0; k < m; ++k) s += static_cast<char>(g() % 256);
        break;
      }
      default:
        s += words[g() % words.size()];
        if (g() % 3) s += ' ';
    }
  }
  return s;
}

Outcome robustness() {
  std::mt19937_64 g(9);
  int crashes = 0, bad_format = 0;
  std::string first;
  for (int t = 0; t < kFuzzCases; ++t) {
    std::string s = fuzz_case(g);
    try {
      std::string d = parse_number_words(s);
      if (!text::is_digits(d) && !d.empty()) ++bad_format;
      for (const auto& kind : kinds()) {
        auto v = extract(kind, s);
        if (v && canonicalize(kind, v->canonical) != v->canonical) ++bad_format;
      }
    } catch (const std::exception& e) {
      ++crashes;
      if (first.empty()) first = e.what();
    }
  }

  const std::vector<std::pair<ExpectedShape, std::string>> payloads = {
      {ExpectedShape::values_payload, ""},
      {ExpectedShape::values_payload, "not json"},
      {ExpectedShape::values_payload, R"({"value": ["12345"]})"},
      {ExpectedShape::values_payload, R"({"values": "12345"})"},
      {ExpectedShape::values_payload, R"({"values": [12345]})"},
      {ExpectedShape::values_payload, R"(["12345"])"},
      {ExpectedShape::transcripts_payload, R"({"transcripts": [{"variation_types": []}]})"},
      {ExpectedShape::transcripts_payload, R"({"transcripts": {"transcript": "x"}})"},
      {ExpectedShape::transcripts_payload, R"({"transcripts": [{"transcript": 5, "variation_types": []}]})"},
      {ExpectedShape::transcripts_payload, R"({"transcripts": [)"},
      {ExpectedShape::boolean_verdict, "maybe"},
      {ExpectedShape::boolean_verdict, "true false"},
      {ExpectedShape::boolean_verdict, ""},
      {ExpectedShape::tag_array, R"({"tags": "filler_words"})"},
      {ExpectedShape::tag_array, R"([1, 2])"},
      {ExpectedShape::instructions_payload, R"({"instructions": [null]})"},
      {ExpectedShape::instructions_payload, R"({"instruction": "x"})"},
  };
  int accepted = 0;
  for (const auto& [shape, raw] : payloads) {
    try {
      parse_payload(raw, shape);
      ++accepted;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::malformed_output) ++accepted;
    }
  }
  // End to end: a provider answering garbage must surface, not yield data.
  int silent = 0;
  ScriptedBackend garbage("here are some values: 12345");
  try {
    generate_values(default_field_spec(EntityKind::zip_code()), 3, garbage,
                    {std::chrono::milliseconds(0), std::chrono::milliseconds(0)});
    ++silent;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::malformed_output) ++silent;
  }
  try {
    validate("one two three four five", EntityValue::from_raw(EntityKind::zip_code(), "12345"),
             default_field_spec(EntityKind::zip_code()), ValidationMode::provider, &garbage,
             {std::chrono::milliseconds(0), std::chrono::milliseconds(0)});
    ++silent;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::judge_malformed) ++silent;
  }
  Outcome o;
  o.pass = crashes == 0 && bad_format == 0 && accepted == 0 && silent == 0;
  o.detail = std::to_string(kFuzzCases) + " fuzz cases, " + std::to_string(crashes) + " exceptions, " +
             std::to_string(bad_format) + " non-canonical results; " + std::to_string(payloads.size() - accepted) +
             "/" + std::to_string(payloads.size()) + " invalid payloads rejected as malformed_output; " +
             std::to_string(2 - silent) + "/2 end-to-end garbage replies surfaced";
  if (!first.empty()) o.detail += "; first exception: " + first;
  return o;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("threw: ") + e.what()};
  }
}

}  // namespace

int main() {
  report(1, "round-trip oracle", guarded(round_trip));
  report(2, "reference examples", guarded(reference_examples));
  report(3, "metric correctness", guarded(metrics));
  report(4, "split contract", guarded(split_contract));
  report(5, "balance", guarded(balance));
  report(6, "optimizer", guarded(optimizer));
  report(7, "cosine and buckets", guarded(cosine_properties));
  report(8, "offline determinism", guarded(determinism));
  report(9, "robustness", guarded(robustness));
  return failures == 0 ? 0 : 1;
}
