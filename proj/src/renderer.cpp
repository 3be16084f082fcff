#include "lingvar/renderer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include "lingvar/error.hpp"
#include "lingvar/lexicon.hpp"
#include "lingvar/rng.hpp"
#include "lingvar/taxonomy.hpp"
#include "lingvar/text.hpp"

namespace lingvar {
namespace {

using Kind = EntityKind::Builtin;
using Ids = std::set<std::string_view>;

const Ids kZipFormats = {"digit_by_digit", "grouped_two",  "grouped_three", "hundred",
                         "mixed_grouping", "spoken_number_split", "reversed", "spelled_out"};
const Ids kDobFormats = {"date_as_4_digits",     "spoken_date_4_digits",    "date_as_5_digits",
                         "spoken_date_5_digits", "date_as_6_digits",        "spoken_date_6_digits",
                         "date_as_8_digits",     "spoken_date_8_digits",    "spoken_month_day_year",
                         "mixed_spoken_and_digits", "casual_or_polite_digits"};
const Ids kNameAttrs = {"name_with_last",      "name_reverse_order", "name_with_title",
                        "name_with_middle",    "name_with_suffix",   "name_with_initials",
                        "name_partial_spelling", "name_with_apostrophe", "name_hyphenated", "nickname"};
const Ids kStructural = {"hesitation",      "correction",      "repetition",      "pause",
                         "rushed",          "with_pause",      "with_repetition", "with_correction",
                         "with_hesitation", "with_filler",     "filler_or_correction", "name_with_correction"};
const Ids kFrames = {"filler_words",  "formal",       "casual",        "polite",             "confident",
                     "uncertain",     "careful",      "confirmation",  "clarification",      "brief_confirmation",
                     "concise_confirmation", "zip_formal", "zip_casual", "zip_polite", "zip_confident",
                     "zip_uncertain", "name_with_prefix"};
// Frames that must open the utterance.
const Ids kAnchored = {"formal", "casual", "zip_formal", "zip_casual", "name_with_prefix"};
const Ids kCorrections = {"correction", "with_correction", "name_with_correction"};
// Formats whose output is a plain run of digit words.
const Ids kUnitFormats = {"digit_by_digit", "spoken_date_4_digits", "spoken_date_5_digits", "spoken_date_6_digits",
                          "spoken_date_8_digits"};

bool in(const Ids& s, std::string_view id) { return s.count(id) > 0; }

std::string_view family(std::string_view id) {
  if (id.starts_with("zip_") && id != "zip_formal" && id != "zip_casual") return id.substr(4);
  return id;
}

bool is_format(Kind k, std::string_view id) {
  if (k == Kind::zip_code) return in(kZipFormats, id);
  if (k == Kind::date_of_birth) return in(kDobFormats, id);
  return false;
}

bool name_attr_conflict(std::string_view a, std::string_view b) {
  static const std::map<std::string_view, Ids> table = {
      {"name_reverse_order",
       {"name_with_title", "name_with_suffix", "name_with_middle", "name_with_initials", "name_partial_spelling"}},
      {"name_with_initials",
       {"name_with_middle", "nickname", "name_partial_spelling", "name_with_title", "name_with_suffix"}},
  };
  for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    auto it = table.find(x);
    if (it != table.end() && in(it->second, y)) return true;
  }
  return false;
}

bool structural_allows(Kind k, std::string_view s, std::string_view f) {
  if (k == Kind::person_name) {
    if (f == "name_with_initials") return false;
    if (f == "name_reverse_order" || f == "name_partial_spelling") return in(kCorrections, s);
    if (s == "rushed") return f == "name_with_last" || f == "name_with_middle" || f == "nickname";
    return true;
  }
  return in(kUnitFormats, f);
}

// True when the pair cannot be rendered together for the kind.
bool conflicts(Kind k, std::string_view a, std::string_view b) {
  if (a == b) return false;
  if (family(a) == family(b)) return true;
  if (a == "not_listed" || b == "not_listed") return true;
  for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    if (x == "direct_and_simple") {
      if (in(kStructural, y) || in(kFrames, y)) return true;
      if (y == "reversed" || y == "casual_or_polite_digits" || y == "name_with_initials" ||
          y == "name_partial_spelling")
        return true;
    }
    if (in(kStructural, x) && (is_format(k, y) || in(kNameAttrs, y)) && !structural_allows(k, x, y)) return true;
  }
  if (is_format(k, a) && is_format(k, b)) return true;
  if (in(kStructural, a) && in(kStructural, b)) return true;
  if (in(kAnchored, a) && in(kAnchored, b)) return true;
  if (k == Kind::person_name && name_attr_conflict(a, b)) return true;
  return false;
}

// ---------------------------------------------------------------- numbers

enum class Lead { none, zero, unit, teen, tens };

struct Chunk {
  std::string text;
  Lead first = Lead::none;
  lexicon::NumberRole open = lexicon::NumberRole::none;
};

Chunk unit_chunk(int d) {
  return {std::string(lexicon::unit_name(d)), d == 0 ? Lead::zero : Lead::unit, lexicon::NumberRole::none};
}

Chunk pair_chunk(int v) {
  if (v < 10) return {"zero " + std::string(lexicon::unit_name(v)), Lead::zero, lexicon::NumberRole::none};
  if (v < 20) return {std::string(lexicon::teen_name(v)), Lead::teen, lexicon::NumberRole::none};
  bool round = v % 10 == 0;
  return {lexicon::two_digit_words(v), Lead::tens, round ? lexicon::NumberRole::tens : lexicon::NumberRole::none};
}

// Three digits "abc" as one chunk.
Chunk triple_chunk(std::string_view g) {
  int a = g[0] - '0', b = g[1] - '0', c = g[2] - '0';
  if (a == 0) {
    Chunk p = pair_chunk(b * 10 + c);
    return {"zero " + p.text, Lead::zero, p.open};
  }
  std::string head = std::string(lexicon::unit_name(a)) + " hundred";
  if (b == 0 && c == 0) return {head, Lead::unit, lexicon::NumberRole::hundred};
  if (b == 0) return {head + " and " + std::string(lexicon::unit_name(c)), Lead::unit, lexicon::NumberRole::none};
  Chunk p = pair_chunk(b * 10 + c);
  return {head + " " + p.text, Lead::unit, p.open};
}

std::string join_chunks(const std::vector<Chunk>& chunks) {
  std::string out;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (i > 0) {
      const Chunk& p = chunks[i - 1];
      const Chunk& n = chunks[i];
      bool sep = (p.open == lexicon::NumberRole::tens && n.first == Lead::unit) ||
                 (p.open == lexicon::NumberRole::hundred && (n.first == Lead::teen || n.first == Lead::tens));
      out += sep ? ", " : " ";
    }
    out += chunks[i].text;
  }
  return out;
}

std::vector<std::string> unit_words(std::string_view digits) {
  std::vector<std::string> w;
  for (char c : digits) w.emplace_back(lexicon::unit_name(c - '0'));
  return w;
}

std::vector<Chunk> unit_chunks(std::string_view digits) {
  std::vector<Chunk> v;
  for (char c : digits) v.push_back(unit_chunk(c - '0'));
  return v;
}

// Digit pair at p as one number word, the rest digit by digit.
std::string with_pair_at(std::string_view d, std::size_t p) {
  std::vector<Chunk> v = unit_chunks(d.substr(0, p));
  v.push_back(pair_chunk((d[p] - '0') * 10 + (d[p + 1] - '0')));
  for (auto& c : unit_chunks(d.substr(p + 2))) v.push_back(c);
  return join_chunks(v);
}

std::vector<std::size_t> hundred_windows(std::string_view d) {
  std::vector<std::size_t> w;
  for (std::size_t i = 0; i + 3 <= d.size(); ++i) {
    if (d[i] != '0') w.push_back(i);
  }
  return w;
}

std::vector<std::size_t> mixed_positions(std::string_view d) {
  std::vector<std::size_t> w;
  for (std::size_t p = 0; p + 2 <= d.size(); ++p) {
    if (d[p] != '0') w.push_back(p);
  }
  return w;
}

std::vector<std::size_t> split_positions(std::string_view d) {
  std::vector<std::size_t> w;
  for (std::size_t p = 0; p + 2 <= d.size(); ++p) {
    if (d[p] >= '2' && d[p + 1] >= '1') w.push_back(p);
  }
  return w;
}

std::string pick_text(const std::vector<std::string>& options, std::uint64_t seed) {
  return options[seed % options.size()];
}

std::string fill(std::string_view tmpl, std::string_view core) { return text::replace_all(std::string(tmpl), "{}", core); }

// ---------------------------------------------------------------- dates

CalendarDate parse_canonical_date(std::string_view c) {
  return {std::stoi(std::string(c.substr(6, 4))), std::stoi(std::string(c.substr(0, 2))),
          std::stoi(std::string(c.substr(3, 2)))};
}

bool year_pivots(const CalendarDate& d) { return expand_two_digit_year(d.year % 100, current_year()) == d.year; }

std::string arabic_suffix(int day) {
  if (day % 100 >= 11 && day % 100 <= 13) return "th";
  switch (day % 10) {
    case 1: return "st";
    case 2: return "nd";
    case 3: return "rd";
    default: return "th";
  }
}

std::string two(int v) {
  std::string s = std::to_string(v);
  return v < 10 ? "0" + s : s;
}

std::string digits_n(const CalendarDate& d, int n) {
  std::string yy = two(d.year % 100);
  switch (n) {
    case 4: return std::to_string(d.month) + std::to_string(d.day) + yy;
    case 5:
      return d.month <= 9 ? std::to_string(d.month) + two(d.day) + yy : two(d.month) + std::to_string(d.day) + yy;
    case 6: return two(d.month) + two(d.day) + yy;
    default: return two(d.month) + two(d.day) + std::to_string(d.year);
  }
}

bool form_ok(const CalendarDate& d, int n) {
  if (n == 8) return true;
  if (!year_pivots(d)) return false;
  if (n == 4) return d.month <= 9 && d.day <= 9;
  if (n == 5) {
    if ((d.month <= 9) == (d.day <= 9)) return false;
    // The other split of the same five digits must not be a date as well.
    std::string s = digits_n(d, 5);
    CalendarDate alt{d.year, d.month <= 9 ? std::stoi(s.substr(0, 2)) : s[0] - '0',
                     d.month <= 9 ? s[2] - '0' : std::stoi(s.substr(1, 2))};
    return !is_valid_date(alt);
  }
  return true;
}

// Falls back to the nearest longer form the date supports.
int effective_form(const CalendarDate& d, int n) {
  static const std::array<int, 4> order = {4, 5, 6, 8};
  for (int f : order) {
    if (f >= n && form_ok(d, f)) return f;
  }
  return 8;
}

std::string compact_pair_words(int v) {
  if (v < 10) return "zero " + std::string(lexicon::unit_name(v));
  if (v < 20 || v % 10 == 0) return lexicon::two_digit_words(v);
  return std::string(lexicon::tens_name(v - v % 10)) + " " + std::string(lexicon::unit_name(v % 10));
}

std::string month_day_year(const CalendarDate& d) {
  return std::string(lexicon::month_name(d.month)) + " " + std::string(lexicon::ordinal_name(d.day)) + ", " +
         spoken_year(d.year);
}

// ---------------------------------------------------------------- names

struct NamePlan {
  std::string first;          // spoken first name (nickname applied)
  std::vector<std::string> units;
  std::size_t first_index = 0;
  std::string text;
  bool unit_based = true;
};

bool feminine(std::string_view name) {
  for (const auto& g : lexicon::given_names()) {
    if (text::to_lower(g.name) == text::to_lower(name)) return g.feminine;
  }
  return false;
}

bool known_given(std::string_view name) {
  for (const auto& g : lexicon::given_names()) {
    if (text::to_lower(g.name) == text::to_lower(name)) return true;
  }
  return false;
}

std::string other_given(std::string_view not_this, Rng& rng) {
  const auto& pool = lexicon::given_names();
  bool fem = feminine(not_this);
  std::vector<std::string_view> candidates;
  for (const auto& g : pool) {
    if (g.feminine != fem || text::to_lower(g.name) == text::to_lower(not_this)) continue;
    if (lexicon::formal_name_for(g.name)) continue;
    candidates.push_back(g.name);
  }
  return std::string(candidates[rng.index(candidates.size())]);
}

std::string plain_surname(Rng& rng, std::string_view not_this = {}) {
  std::vector<std::string_view> pool;
  for (auto s : lexicon::surnames()) {
    if (s.find('\'') == std::string_view::npos && s != not_this) pool.push_back(s);
  }
  return std::string(pool[rng.index(pool.size())]);
}

std::string spell(std::string_view name) {
  std::vector<std::string> letters;
  for (char c : name) {
    if (std::isalpha(static_cast<unsigned char>(c))) letters.emplace_back(1, static_cast<char>(std::toupper(c)));
  }
  return text::join(letters, "-");
}

NamePlan name_plan(const std::string& given, const std::set<std::string_view>& attrs, std::uint64_t seed, Rng& rng) {
  auto has = [&](std::string_view a) { return attrs.count(a) > 0; };
  NamePlan p;
  p.first = given;
  if (has("nickname")) {
    if (auto n = lexicon::nickname_for(given)) p.first = *n;
  }
  std::string surname = plain_surname(rng);
  if (has("name_with_apostrophe")) {
    const auto& ap = lexicon::apostrophe_surnames();
    surname = std::string(ap[rng.index(ap.size())]);
  }
  if (has("name_hyphenated")) surname += "-" + plain_surname(rng, surname);
  std::string middle = other_given(given, rng);
  std::string title;
  if (has("name_with_title")) {
    std::vector<std::string> titles;
    if (!known_given(given)) {
      titles = {"Dr."};
    } else if (feminine(given)) {
      titles = {"Ms.", "Mrs.", "Dr."};
    } else {
      titles = {"Mr.", "Dr."};
    }
    title = titles[seed % titles.size()];
  }
  std::string suffix;
  if (has("name_with_suffix")) {
    static const std::vector<std::string> suffixes = {"Jr.", "Sr.", "III"};
    suffix = suffixes[seed % suffixes.size()];
  }

  if (has("name_with_initials")) {
    std::string fi(1, static_cast<char>(std::toupper(static_cast<unsigned char>(given[0]))));
    std::string mi(1, middle[0]);
    p.text = fi + ". " + mi + ". " + surname + ", first name " + p.first;
    p.unit_based = false;
    return p;
  }
  if (has("name_reverse_order")) {
    p.text = surname + ", " + p.first;
    p.units = {surname + ",", p.first};
    p.first_index = 1;
    return p;
  }
  if (!title.empty()) p.units.push_back(title);
  p.first_index = p.units.size();
  p.units.push_back(p.first);
  if (has("name_with_middle")) p.units.push_back(middle);
  p.units.push_back(surname);
  if (!suffix.empty()) p.units.push_back(suffix);
  p.text = text::join(p.units, " ");
  if (has("name_partial_spelling")) {
    std::string sp = spell(p.first);
    std::string before = text::join(std::vector<std::string>(p.units.begin(), p.units.begin() + static_cast<long>(p.first_index) + 1), " ");
    std::string after = text::join(std::vector<std::string>(p.units.begin() + static_cast<long>(p.first_index) + 1, p.units.end()), " ");
    std::vector<std::string> forms = {before + ", that's " + sp + " " + after, p.text + ", that's " + sp,
                                      p.text + ", spelled " + sp};
    p.text = pick_text(forms, seed);
    p.unit_based = false;
  }
  return p;
}

// ---------------------------------------------------------------- structure

struct Core {
  std::vector<std::string> units;  // digit words or name parts
  bool digits = true;              // units are digit words
  std::size_t first_index = 0;     // name: index of the given name
  std::string text;
  bool framed = false;             // text already carries its own frame
};

std::string join(const std::vector<std::string>& v, std::size_t from, std::size_t to, std::string_view sep = " ") {
  return text::join(std::vector<std::string>(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(to)),
                    sep);
}

std::string wrong_digit(const std::string& word, Rng& rng) {
  std::string w;
  do {
    w = std::string(lexicon::unit_name(rng.range(0, 9)));
  } while (w == word);
  return w;
}

std::string correction_text(const Core& c, const std::string& given, std::uint64_t seed, Rng& rng) {
  static const std::vector<std::string> markers = {"... no wait, ", ", no, ", ", sorry, ", ", I mean, "};
  const std::string& marker = markers[seed % markers.size()];
  if (!c.digits) {
    std::string wrong = other_given(given, rng);
    return wrong + marker + c.text;
  }
  const std::size_t n = c.units.size();
  if ((seed / markers.size()) % 2 == 0) {
    std::size_t lo = (n + 2) / 2;
    std::size_t k = static_cast<std::size_t>(rng.range(static_cast<int>(lo), static_cast<int>(n)));
    std::vector<std::string> p(c.units.begin(), c.units.begin() + static_cast<long>(k) - 1);
    p.push_back(wrong_digit(c.units[k - 1], rng));
    return text::join(p, " ") + marker + join(c.units, k - 1, n);
  }
  std::string w1 = std::string(lexicon::unit_name(rng.range(0, 9)));
  std::string w2 = std::string(lexicon::unit_name(rng.range(0, 9)));
  return w1 + " " + w2 + marker + c.text;
}

std::string filler_text(const Core& c, std::uint64_t seed) {
  if (c.units.size() >= 4) {
    std::size_t cut = c.units.size() / 2 + 1;
    std::vector<std::string> forms = {"um, " + join(c.units, 0, cut) + ", you know, " + join(c.units, cut, c.units.size()),
                                      join(c.units, 0, cut) + ", uh, " + join(c.units, cut, c.units.size()),
                                      "uh, " + join(c.units, 0, 2) + ", um, " + join(c.units, 2, c.units.size())};
    return pick_text(forms, seed);
  }
  return pick_text({"um, " + c.text + ", you know", c.text + ", uh, that's it"}, seed);
}

std::size_t repeat_length(const Core& c, std::uint64_t seed) {
  const std::size_t n = c.units.size();
  std::vector<std::size_t> options;
  for (std::size_t m : {2u, 3u, 4u, 1u}) {
    if (m < n && m * 2 != n) options.push_back(m);
    if (options.size() == 2) break;
  }
  return options[seed % options.size()];
}

std::string apply_structural(std::string_view id, const Core& c, const std::string& given, std::uint64_t seed,
                             Rng& rng) {
  const std::size_t n = c.units.size();
  if (in(kCorrections, id)) return correction_text(c, given, seed, rng);
  if (id == "filler_or_correction") {
    if (seed % 2 == 0) return pick_text({"uh, " + c.text, "um, " + c.text}, seed / 2);
    return correction_text(c, given, seed / 2, rng);
  }
  if (id == "with_filler") return filler_text(c, seed);
  if (id == "hesitation") {
    std::string body = join(c.units, 0, n, "... ");
    std::vector<std::string> forms = {"it's... " + body + "...", "well... " + body + "...",
                                      "hmm... let me see... " + body};
    return pick_text(forms, seed);
  }
  if (id == "with_hesitation") {
    std::string body = join(c.units, 0, n, "... ");
    return pick_text({body, "it is " + body, body + "...", "so " + body}, seed);
  }
  if (id == "repetition" || id == "with_repetition") {
    if (!c.digits) return pick_text({c.text + ", " + c.text, "it is " + c.text + ", " + c.text}, seed);
    std::size_t m = repeat_length(c, seed);
    std::string g1 = join(c.units, 0, m);
    std::string rest = join(c.units, m, n);
    std::vector<std::string> prefixes = {"", "it is ", "so ", "that's "};
    return prefixes[(seed / 2) % prefixes.size()] + g1 + ", " + g1 + ", " + rest;
  }
  if (id == "pause") {
    if (!c.digits) {
      std::size_t cut = c.first_index + 1;
      if (cut >= n) return pick_text({c.text + ", pause, yes", "pause, " + c.text}, seed);
      std::vector<std::string> forms = {join(c.units, 0, cut) + ", pause, " + join(c.units, cut, n),
                                        join(c.units, 0, cut) + ", (pause), " + join(c.units, cut, n)};
      return pick_text(forms, seed);
    }
    std::size_t cut = std::min<std::size_t>(2 + seed % 2, n - 1);
    std::string a = join(c.units, 0, cut), b = join(c.units, cut, n);
    std::vector<std::string> forms = {a + ", pause, " + b, a + ", (pause), " + b, "it is " + a + ", pause, " + b};
    if (n >= 5) forms.push_back(join(c.units, 0, 2) + ", pause, " + join(c.units, 2, 4) + ", pause, " + join(c.units, 4, n));
    return pick_text(forms, seed);
  }
  if (id == "with_pause") {
    static const std::vector<std::vector<std::size_t>> splits = {{2, 2, 1}, {3, 2}, {2, 3}, {1, 2, 2}};
    const auto& s = splits[seed % splits.size()];
    std::vector<std::string> parts;
    std::size_t at = 0;
    for (std::size_t len : s) {
      std::size_t end = std::min(n, at + len);
      if (at < end) parts.push_back(join(c.units, at, end));
      at = end;
    }
    if (at < n) parts.push_back(join(c.units, at, n));
    return text::join(parts, "... ");
  }
  if (id == "rushed") {
    std::string glued;
    if (c.digits) {
      glued = text::join(c.units, "");
    } else {
      for (const auto& u : c.units) glued += u;
    }
    return pick_text({glued, "it is " + glued, glued + " that's it", "ok " + glued}, seed);
  }
  throw Error(ErrorCode::usage_error, "not a structural variation: " + std::string(id));
}

// ---------------------------------------------------------------- frames

std::string noun(Kind k) {
  switch (k) {
    case Kind::zip_code: return "number";
    case Kind::date_of_birth: return "date of birth";
    default: return "name";
  }
}

const std::vector<std::string>& solo_templates(std::string_view id, Kind k) {
  static std::map<std::pair<std::string, Kind>, std::vector<std::string>> cache;
  auto key = std::pair{std::string(id), k};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const std::string nn = noun(k);
  std::map<std::string, std::vector<std::string>> t = {
      {"filler_words", {"um, it's {}", "uh, {}", "{}, you know", "um, {}"}},
      {"formal", {"the " + nn + " is {}", "the " + nn + " on file is {}", "for the record, the " + nn + " is {}",
                  "I would like to state that the " + nn + " is {}"}},
      {"casual", {"it's {}", "it's just {}", "sure, it's {}", "well, it's {}"}},
      {"polite", {"please, it's {}", "{}, please", "it's {}, thank you", "thanks, it's {}"}},
      {"confident", {"definitely {}", "it's absolutely {}", "{}, for sure", "certainly, {}"}},
      {"uncertain", {"I think it's {}", "maybe {}", "probably {}", "{}, I guess"}},
      {"careful", {"carefully, {}", "slowly, {}", "let me say it carefully, {}"}},
      {"confirmation", {"{}, is that right?", "{}, is that correct?", "so that's {}, right?"}},
      {"clarification", {"{}, does that make sense?", "to be clear, {}", "{}, to clarify"}},
      {"brief_confirmation", {"yes, {}", "yep, {}", "yes, it's {}"}},
      {"concise_confirmation", {"confirmed, {}", "{}, confirmed", "correct, {}", "{}, correct"}},
      {"zip_formal", {"the digits are {}", "the digits of my zip code are {}", "my postal code reads {}",
                      "the zip code on record is {}"}},
      {"zip_casual", {"yeah, it's {}", "yeah, {}", "yeah, my zip's {}", "zip's {}"}},
      {"zip_polite", {"my zip code is {}, thank you", "sure, the zip is {}, thanks", "the zip code is {}, please",
                      "thank you, my zip is {}"}},
      {"zip_confident", {"my zip code is definitely {}", "the zip is {}, I'm certain", "I'm sure my zip is {}",
                         "it's {}, that's my zip for sure"}},
      {"zip_uncertain", {"I think my zip is {}", "my zip code might be {}", "the zip is probably {}",
                         "I believe my zip code is {}"}},
      {"name_with_prefix", {"my name is {}", "this is {}", "my name's {}"}},
  };
  return cache[key] = t.at(key.first);
}

std::string composed_template(std::string_view id, Kind k) {
  static const std::map<std::string, std::string, std::less<>> t = {
      {"filler_words", "um, {}"},        {"casual", "it's {}"},
      {"polite", "please, {}"},          {"confident", "definitely {}"},
      {"uncertain", "maybe {}"},         {"careful", "carefully, {}"},
      {"confirmation", "{}, is that right?"}, {"clarification", "{}, does that make sense?"},
      {"brief_confirmation", "yes, {}"}, {"concise_confirmation", "confirmed, {}"},
      {"zip_formal", "the digits are {}"}, {"zip_casual", "yeah, {}"},
      {"name_with_prefix", "my name is {}"},
  };
  if (family(id) == "formal") return "the " + noun(k) + " is {}";
  return t.find(family(id))->second;
}

int frame_rank(std::string_view id) {
  static const std::map<std::string_view, int> rank = {
      {"uncertain", 0},     {"confident", 1},          {"careful", 2},
      {"polite", 3},        {"filler_words", 4},       {"concise_confirmation", 5},
      {"brief_confirmation", 6}, {"clarification", 7}, {"confirmation", 8}};
  if (in(kAnchored, id)) return 100;
  return rank.at(family(id));
}

std::string apply_frames(std::vector<std::string_view> frames, const std::string& core, Kind k, std::uint64_t seed,
                         bool solo_allowed) {
  if (frames.empty()) return core;
  if (frames.size() == 1 && solo_allowed) return fill(pick_text(solo_templates(frames[0], k), seed), core);
  std::stable_sort(frames.begin(), frames.end(),
                   [](std::string_view a, std::string_view b) { return frame_rank(a) < frame_rank(b); });
  std::string out = core;
  for (auto f : frames) out = fill(composed_template(f, k), out);
  return out;
}

std::string neutral(Kind k, const std::string& core, std::uint64_t seed) {
  switch (k) {
    case Kind::zip_code:
      return fill(pick_text({"{}", "my zip code is {}", "zip code {}", "that would be {}", "it is {}", "that's {}",
                             "it would be {}", "you can put {}", "{} is the zip", "I live in {}", "my zip is {}",
                             "zip {}"},
                            seed),
                  core);
    case Kind::date_of_birth:
      return fill(pick_text({"{}", "my date of birth is {}", "date of birth {}", "that would be {}", "it is {}",
                             "I was born {}", "born {}", "my birthday is {}", "that's {}", "it would be {}",
                             "you can put {}", "my birth date is {}"},
                            seed),
                  core);
    default:
      return fill(pick_text({"{}", "it is {}", "that would be {}", "{} speaking", "you have {}", "that's {}",
                             "you can put {}", "put down {}", "it's under {}", "the booking is for {}",
                             "call me {}", "{} here"},
                            seed),
                  core);
  }
}

// ---------------------------------------------------------------- cores

Core zip_core(const std::string& d, std::string_view format, bool direct, std::uint64_t seed) {
  Core c;
  c.units = unit_words(d);
  c.text = text::join(c.units, " ");
  auto choose = [&](const std::vector<std::size_t>& positions) { return positions[seed % positions.size()]; };
  if (format == "grouped_two") {
    std::vector<Chunk> v;
    for (std::size_t i = 0; i + 2 <= d.size(); i += 2) v.push_back(pair_chunk((d[i] - '0') * 10 + (d[i + 1] - '0')));
    if (d.size() % 2) v.push_back(unit_chunk(d.back() - '0'));
    c.text = join_chunks(v);
  } else if (format == "grouped_three") {
    c.text = number_to_spoken(d, Grouping::triples);
  } else if (format == "hundred") {
    auto w = hundred_windows(d);
    if (!w.empty()) {
      std::size_t i = choose(w);
      std::vector<Chunk> v = unit_chunks(std::string_view(d).substr(0, i));
      v.push_back(triple_chunk(std::string_view(d).substr(i, 3)));
      for (auto& ch : unit_chunks(std::string_view(d).substr(i + 3))) v.push_back(ch);
      c.text = join_chunks(v);
    }
  } else if (format == "mixed_grouping") {
    auto w = mixed_positions(d);
    if (!w.empty()) c.text = with_pair_at(d, choose(w));
  } else if (format == "spoken_number_split") {
    auto w = split_positions(d);
    if (!w.empty()) {
      std::size_t p = choose(w);
      std::vector<std::string> words = unit_words(std::string_view(d).substr(0, p));
      words.emplace_back(lexicon::tens_name((d[p] - '0') * 10));
      words.emplace_back(lexicon::unit_name(d[p + 1] - '0'));
      for (auto& u : unit_words(std::string_view(d).substr(p + 2))) words.push_back(u);
      c.text = text::join(words, " ");
    }
  } else if (format == "reversed") {
    std::vector<std::string> r(c.units.rbegin(), c.units.rend());
    std::string body = text::join(r, " ");
    c.text = fill(pick_text({"{}, backwards", "backwards, that's {}", "in reverse, {}", "{}, that's in reverse"}, seed),
                  body);
    c.framed = true;
  } else if (format == "spelled_out") {
    c.text = text::join(c.units, "-");
  } else if (format.empty() && direct) {
    std::string cap = c.text;
    cap[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cap[0])));
    c.text = pick_text({c.text, d, cap + ".", c.text + "."}, seed);
  }
  return c;
}

Core dob_core(const CalendarDate& date, std::string_view format, bool direct, bool plain_frames, std::uint64_t seed) {
  Core c;
  c.units = unit_words(digits_n(date, 8));
  c.text = text::join(c.units, " ");
  auto n_of = [](std::string_view f) { return f[f.find_first_of("4568")] - '0'; };
  if (format.starts_with("date_as_")) {
    c.text = digits_n(date, effective_form(date, n_of(format)));
  } else if (format.starts_with("spoken_date_")) {
    c.units = unit_words(digits_n(date, effective_form(date, n_of(format))));
    c.text = text::join(c.units, " ");
  } else if (format == "spoken_month_day_year") {
    c.text = month_day_year(date);
  } else if (format == "mixed_spoken_and_digits") {
    std::string month(lexicon::month_name(date.month));
    std::string dd = two(date.day);
    std::string pair = std::string(lexicon::unit_name(dd[0] - '0')) + " " + std::string(lexicon::unit_name(dd[1] - '0'));
    std::vector<std::string> forms = {month + " " + pair + ", " + spoken_year(date.year),
                                      month + " " + std::to_string(date.day) + ", " + std::to_string(date.year),
                                      month + " " + std::to_string(date.day) + ", " + spoken_year(date.year),
                                      month + " " + std::to_string(date.day) + arabic_suffix(date.day) + ", " +
                                          std::to_string(date.year)};
    c.text = pick_text(forms, seed);
  } else if (format == "casual_or_polite_digits") {
    std::string body;
    if (year_pivots(date)) {
      std::string m = date.month <= 9 ? std::string(lexicon::unit_name(date.month)) : lexicon::two_digit_words(date.month);
      std::string d;
      if (date.day <= 9) {
        d = date.month <= 9 ? std::string(lexicon::unit_name(date.day)) : "zero " + std::string(lexicon::unit_name(date.day));
      } else {
        d = compact_pair_words(date.day);
      }
      body = m + " " + d + ", " + compact_pair_words(date.year % 100);
    } else {
      std::string all = digits_n(date, 8);
      body = text::join(unit_words(all.substr(0, 2)), " ") + ", " + text::join(unit_words(all.substr(2, 2)), " ") +
             ", " + text::join(unit_words(all.substr(4)), " ");
    }
    c.text = fill(pick_text({"please, {}", "yeah, {}", "sure, it's {}", "{}, please"}, seed), body);
    c.framed = true;
  } else if (format.empty() && direct) {
    c.text = pick_text({c.text, digits_n(date, 8), month_day_year(date), format_date(date)}, seed);
  } else if (format.empty() && plain_frames && (seed / 7) % 2 == 1) {
    c.text = month_day_year(date);
  }
  return c;
}

void validate_ids(const EntityKind& kind, const std::vector<std::string>& ids) {
  if (ids.size() > kMaxVariationsPerRender) {
    throw Error(ErrorCode::usage_error, "at most " + std::to_string(kMaxVariationsPerRender) +
                                            " variations per render, got " + std::to_string(ids.size()));
  }
  auto known = VariationRegistry::builtin().ids_for(kind);
  for (const auto& id : ids) {
    if (id == kNotListed) continue;
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw Error(ErrorCode::usage_error, "variation '" + id + "' does not apply to " + kind.tag());
    }
  }
}
}  // namespace

std::string number_to_spoken(std::string_view digits, Grouping grouping) {
  if (!text::is_digits(digits) || digits.empty()) {
    throw Error(ErrorCode::format_error, "not a digit string: '" + std::string(digits) + "'");
  }
  std::vector<Chunk> v;
  switch (grouping) {
    case Grouping::single:
      v = unit_chunks(digits);
      break;
    case Grouping::pairs:
      for (std::size_t i = 0; i < digits.size(); i += 2) {
        if (i + 1 < digits.size()) {
          v.push_back(pair_chunk((digits[i] - '0') * 10 + (digits[i + 1] - '0')));
        } else {
          v.push_back(unit_chunk(digits[i] - '0'));
        }
      }
      break;
    case Grouping::triples: {
      // A leading digit on its own, then pairs: "one twenty-three forty-five".
      std::size_t at = digits.size() % 2;
      if (at) v.push_back(unit_chunk(digits[0] - '0'));
      for (; at < digits.size(); at += 2) v.push_back(pair_chunk((digits[at] - '0') * 10 + (digits[at + 1] - '0')));
      break;
    }
    case Grouping::mixed: {
      std::size_t at = 0;
      if (digits.size() >= 2) {
        v.push_back(pair_chunk((digits[0] - '0') * 10 + (digits[1] - '0')));
        at = 2;
      }
      for (auto& c : unit_chunks(digits.substr(at))) v.push_back(c);
      break;
    }
  }
  return join_chunks(v);
}

std::string spoken_year(int year) {
  int hi = year / 100, lo = year % 100;
  if (year >= 2000 && year <= 2099) {
    if (lo == 0) return "two thousand";
    if (lo < 10) return "two thousand " + std::string(lexicon::unit_name(lo));
    return "two thousand " + lexicon::two_digit_words(lo);
  }
  if (hi < 10 || hi > 99) return number_to_spoken(std::to_string(year), Grouping::single);
  std::string head = lexicon::two_digit_words(hi);
  if (lo == 0) return head + " hundred";
  if (lo < 10) return head + " oh " + std::string(lexicon::unit_name(lo));
  return head + " " + lexicon::two_digit_words(lo);
}

bool render_is_faithful(const EntityValue& value, std::string_view id) {
  switch (value.kind.builtin()) {
    case Kind::zip_code: {
      const std::string& d = value.canonical;
      if (id == "hundred") return !hundred_windows(d).empty();
      if (id == "spoken_number_split") return !split_positions(d).empty();
      if (id == "mixed_grouping") return !mixed_positions(d).empty();
      if (id == "grouped_two") return d[0] != '0' && d[2] != '0';
      if (id == "grouped_three") return d[1] != '0';
      return true;
    }
    case Kind::date_of_birth: {
      CalendarDate date = parse_canonical_date(value.canonical);
      for (int n : {4, 5, 6}) {
        std::string s = std::to_string(n);
        if (id == "date_as_" + s + "_digits" || id == "spoken_date_" + s + "_digits") return form_ok(date, n);
      }
      if (id == "casual_or_polite_digits") return year_pivots(date);
      return true;
    }
    case Kind::person_name:
      if (id == "nickname") return lexicon::nickname_for(value.canonical).has_value();
      return true;
    case Kind::extension:
      return false;
  }
  return false;
}

void check_combination(const EntityKind& kind, const std::vector<std::string>& ids) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (conflicts(kind.builtin(), ids[i], ids[j])) throw UnsupportedCombination(ids[i], ids[j]);
    }
  }
}

bool combination_supported(const EntityKind& kind, const std::vector<std::string>& ids) {
  try {
    check_combination(kind, ids);
    return true;
  } catch (const UnsupportedCombination&) {
    return false;
  }
}

std::string render(const RenderRequest& request) {
  const EntityKind& kind = request.value.kind;
  if (kind.is_extension()) throw Error(ErrorCode::unknown_kind, "no renderer for " + kind.tag());
  validate_ids(kind, request.variation_ids);
  check_combination(kind, request.variation_ids);

  const Kind k = kind.builtin();
  const std::uint64_t seed = request.seed;
  Rng rng(splitmix64(seed ^ text::fnv1a64(request.value.canonical)));

  std::string format, structural;
  std::vector<std::string_view> frames;
  std::set<std::string_view> attrs;
  bool direct = false;
  for (const auto& id : request.variation_ids) {
    if (id == "direct_and_simple") {
      direct = true;
    } else if (is_format(k, id)) {
      format = id;
    } else if (in(kNameAttrs, id)) {
      attrs.insert(id);
    } else if (in(kStructural, id)) {
      structural = id;
    } else if (in(kFrames, id)) {
      frames.push_back(id);
    }
  }

  Core core;
  std::string given;
  if (k == Kind::zip_code) {
    core = zip_core(request.value.canonical, format, direct, seed);
  } else if (k == Kind::date_of_birth) {
    core = dob_core(parse_canonical_date(request.value.canonical), format, direct, structural.empty(), seed);
  } else {
    given = request.value.canonical;
    NamePlan p = name_plan(given, attrs, seed, rng);
    core.units = p.units;
    core.digits = false;
    core.first_index = p.first_index;
    core.text = p.text;
  }

  std::string out = core.text;
  if (!structural.empty()) out = apply_structural(structural, core, given, seed, rng);
  const bool bare = structural.empty() && frames.empty();
  if (bare) {
    if (!direct && !core.framed) out = neutral(k, out, seed);
    return out;
  }
  return apply_frames(frames, out, k, seed, structural.empty() && !core.framed);
}

}  // namespace lingvar
