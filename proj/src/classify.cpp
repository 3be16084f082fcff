#include <algorithm>
#include <functional>
#include <map>

#include "lingvar/error.hpp"
#include "lingvar/lexicon.hpp"
#include "lingvar/prompts.hpp"
#include "lingvar/providers.hpp"
#include "lingvar/spoken_parser.hpp"
#include "lingvar/taxonomy.hpp"
#include "lingvar/text.hpp"

namespace lingvar {
namespace {

using lexicon::NumberRole;

bool numeric(const Token& t) { return t.cls == TokenClass::digit_word || t.cls == TokenClass::number_word; }

bool value_token(const Token& t) {
  return numeric(t) || t.cls == TokenClass::ordinal || t.cls == TokenClass::month || t.cls == TokenClass::name_token;
}

struct NumberUnit {
  int len = 0;  // digits contributed
  bool split = false;  // tens and unit written as two separate words
  std::size_t first = 0;
  std::size_t last = 0;
};

// Surface features shared by all signatures.
struct Analysis {
  std::vector<Token> toks;
  std::vector<std::string> words;
  std::string spaced;  // " w1 w2 ... " over word tokens
  std::string lower;
  std::vector<NumberUnit> units;
  bool hundred = false;

  explicit Analysis(std::string_view text) {
    toks = tokenize(text).tokens;
    lower = text::to_lower(text::trim(text));
    spaced = " ";
    for (const auto& t : toks) {
      if (t.punct) continue;
      words.push_back(t.norm);
      spaced += t.norm + " ";
    }
    build_units();
  }

  void build_units() {
    for (std::size_t i = 0; i < toks.size(); ++i) {
      const Token& t = toks[i];
      if (!numeric(t)) continue;
      bool adj = !units.empty() && units.back().last + 1 == i;
      switch (t.role) {
        case NumberRole::unit: {
          const Token* prev = adj ? &toks[i - 1] : nullptr;
          if (prev && prev->role == NumberRole::tens && t.value >= 1 && units.back().len == 2 &&
              units.back().first == i - 1) {
            units.back().last = i;
            units.back().split = !t.hyphen_part;
          } else {
            units.push_back({1, false, i, i});
          }
          break;
        }
        case NumberRole::teen:
        case NumberRole::tens:
          units.push_back({2, false, i, i});
          break;
        case NumberRole::hundred:
          hundred = true;
          break;
        case NumberRole::literal:
          units.push_back({static_cast<int>(t.surface.size()), false, i, i});
          break;
        default:
          break;
      }
    }
  }

  bool has(std::string_view w) const { return std::find(words.begin(), words.end(), w) != words.end(); }
  bool phrase(std::string_view p) const { return spaced.find(" " + std::string(p) + " ") != std::string::npos; }
  std::string first_word() const { return words.empty() ? "" : words.front(); }
  bool starts_with(std::string_view p) const { return spaced.rfind(" " + std::string(p) + " ", 0) == 0; }

  bool any(TokenClass c) const {
    return std::any_of(toks.begin(), toks.end(), [c](const Token& t) { return t.cls == c; });
  }
  std::size_t count_if(const std::function<bool(const Token&)>& f) const {
    return static_cast<std::size_t>(std::count_if(toks.begin(), toks.end(), f));
  }
  bool numeric_at(std::size_t i) const { return i < toks.size() && numeric(toks[i]); }
  std::size_t ellipses_between_numbers() const {
    std::size_t n = 0;
    for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
      if (toks[i].ellipsis && numeric(toks[i - 1]) && numeric(toks[i + 1])) ++n;
    }
    return n;
  }
  std::size_t ellipses() const {
    return count_if([](const Token& t) { return t.ellipsis; });
  }
  bool has_literal() const {
    return std::any_of(toks.begin(), toks.end(), [](const Token& t) { return t.role == NumberRole::literal; });
  }
  bool only_digit_words() const {
    bool any_num = false;
    for (const auto& t : toks) {
      if (!numeric(t)) continue;
      any_num = true;
      if (t.role != NumberRole::unit || t.glued || t.hyphen_part) return false;
    }
    return any_num;
  }
  std::size_t digit_word_count() const {
    return count_if([](const Token& t) { return t.cls == TokenClass::digit_word; });
  }
  std::size_t month_index() const {
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (toks[i].cls == TokenClass::month) return i;
    }
    return toks.size();
  }
  std::vector<std::vector<const Token*>> comma_groups() const {
    std::vector<std::vector<const Token*>> groups(1);
    for (const auto& t : toks) {
      if (t.punct && (t.norm == "," || t.norm == ";")) {
        groups.emplace_back();
      } else {
        groups.back().push_back(&t);
      }
    }
    return groups;
  }
};

bool sig_repetition(const Analysis& a) {
  auto groups = a.comma_groups();
  auto values = [](const std::vector<const Token*>& g) {
    std::vector<std::string> v;
    for (const Token* t : g) {
      if (value_token(*t)) v.push_back(t->norm);
    }
    return v;
  };
  for (std::size_t i = 1; i < groups.size(); ++i) {
    auto p = values(groups[i - 1]);
    if (!p.empty() && p == values(groups[i])) return true;
  }
  return false;
}

bool sig_correction(const Analysis& a) {
  for (std::size_t i = 0; i < a.toks.size(); ++i) {
    if (a.toks[i].cls != TokenClass::correction_marker) continue;
    for (std::size_t k = i + 1; k < a.toks.size(); ++k) {
      if (value_token(a.toks[k])) return true;
    }
  }
  return false;
}

bool sig_filler(const Analysis& a) { return a.any(TokenClass::filler); }

bool sig_hesitation(const Analysis& a) {
  if (a.ellipses() >= 3) return true;
  return a.toks.size() >= 2 && !a.toks[0].punct && a.toks[1].ellipsis;
}

bool sig_polite(const Analysis& a) { return a.has("please") || a.has("thank") || a.has("thanks"); }
bool sig_confident(const Analysis& a) {
  return a.has("definitely") || a.has("certainly") || a.has("absolutely") || a.phrase("for sure") ||
         a.phrase("i'm sure") || a.phrase("i'm certain");
}
bool sig_uncertain(const Analysis& a) {
  return a.phrase("i think") || a.phrase("i believe") || a.has("maybe") || a.has("probably") ||
         a.phrase("not sure") || a.phrase("i guess") || a.phrase("might be");
}

bool sig_direct(const Analysis& a) {
  bool any = false;
  for (const auto& t : a.toks) {
    if (t.punct) {
      if (t.norm == "?") return false;
      continue;
    }
    if (!value_token(t) || t.glued) return false;
    any = true;
  }
  return any;
}

bool sig_reversed(const Analysis& a) {
  for (const auto& w : a.words) {
    if (lexicon::is_reversal_cue(w)) return true;
  }
  int run = 0;
  int prev = -10;
  std::size_t prev_idx = 0;
  for (std::size_t i = 0; i < a.toks.size(); ++i) {
    const Token& t = a.toks[i];
    if (t.role != NumberRole::unit) continue;
    bool chained = run > 0 && prev_idx + 1 == i && t.value == prev - 1;
    run = chained ? run + 1 : 1;
    if (run >= 5) return true;
    prev = t.value;
    prev_idx = i;
  }
  return false;
}

bool sig_with_pause(const Analysis& a) {
  bool gap = false;
  for (std::size_t i = 1; i + 1 < a.toks.size(); ++i) {
    if (a.toks[i].ellipsis && numeric(a.toks[i - 1]) && numeric(a.toks[i + 1])) gap = true;
  }
  if (!gap) return false;
  std::size_t run = 0;
  for (const auto& t : a.toks) {
    run = numeric(t) ? run + 1 : 0;
    if (run >= 2) return true;
  }
  return false;
}

bool sig_with_filler(const Analysis& a) {
  for (std::size_t i = 0; i < a.toks.size(); ++i) {
    if (a.toks[i].cls != TokenClass::filler) continue;
    bool before = false, after = false;
    for (std::size_t k = 0; k < i; ++k) before = before || numeric(a.toks[k]);
    for (std::size_t k = i + 1; k < a.toks.size(); ++k) after = after || numeric(a.toks[k]);
    if (before && after) return true;
  }
  return false;
}

bool sig_spelled_out(const Analysis& a) {
  std::size_t chain = 0;
  for (const auto& t : a.toks) {
    if (t.role == NumberRole::unit && t.hyphen_part) {
      chain = chain == 0 ? 0 : chain + 1;
    } else if (t.role == NumberRole::unit) {
      chain = 1;
    } else {
      chain = 0;
    }
    if (chain >= 3) return true;
  }
  return false;
}

std::size_t count_units(const Analysis& a, int len) {
  return static_cast<std::size_t>(
      std::count_if(a.units.begin(), a.units.end(), [len](const NumberUnit& u) { return u.len == len; }));
}

bool sig_grouped_three(const Analysis& a) {
  for (std::size_t i = 0; i + 1 < a.units.size(); ++i) {
    const auto& u = a.units[i];
    const auto& w = a.units[i + 1];
    if (u.len == 1 && w.len == 2 && u.last + 1 == w.first && a.toks[u.first].role == NumberRole::unit) return true;
  }
  return false;
}

// Day expression right after the month, or nothing.
const Token* day_token(const Analysis& a, std::size_t* index = nullptr) {
  std::size_t m = a.month_index();
  std::size_t i = m + 1;
  while (i < a.toks.size() && (a.toks[i].norm == "the" || a.toks[i].norm == "of")) ++i;
  if (m >= a.toks.size() || i >= a.toks.size() || a.toks[i].punct) return nullptr;
  if (index) *index = i;
  return &a.toks[i];
}

bool day_is_digit_pair(const Analysis& a) {
  std::size_t i = 0;
  const Token* d = day_token(a, &i);
  return d && d->role == NumberRole::unit && i + 1 < a.toks.size() && a.toks[i + 1].role == NumberRole::unit;
}

bool sig_spoken_month(const Analysis& a) {
  const Token* d = day_token(a);
  if (!d || a.has_literal()) return false;
  if (d->cls == TokenClass::ordinal) return !text::is_digits(d->norm.substr(0, 1));
  if (d->role == NumberRole::teen || d->role == NumberRole::tens) return true;
  return d->role == NumberRole::unit && !day_is_digit_pair(a);
}

bool sig_mixed_date(const Analysis& a) {
  const Token* d = day_token(a);
  if (!d) return false;
  if (a.has_literal()) return true;
  if (d->cls == TokenClass::ordinal && text::is_digits(d->norm.substr(0, 1))) return true;
  return day_is_digit_pair(a);
}

bool date_as(const Analysis& a, std::size_t n) {
  if (a.month_index() < a.toks.size()) return false;
  std::size_t literals = 0, other_numbers = 0;
  const Token* lit = nullptr;
  for (const auto& t : a.toks) {
    if (t.role == NumberRole::literal) {
      ++literals;
      lit = &t;
    } else if (numeric(t)) {
      ++other_numbers;
    }
  }
  return literals == 1 && other_numbers == 0 && lit->surface.size() == n;
}

bool spoken_date(const Analysis& a, std::size_t n) {
  if (a.month_index() < a.toks.size() || a.has_literal()) return false;
  return a.only_digit_words() && a.digit_word_count() == n;
}

bool sig_casual_polite_digits(const Analysis& a) {
  if (a.month_index() < a.toks.size()) return false;
  bool courtesy = a.has("please") || a.has("yeah") || a.has("sure") || a.has("okay") || a.has("ok") ||
                  a.has("thanks");
  if (!courtesy) return false;
  std::size_t groups = 0;
  for (const auto& g : a.comma_groups()) {
    if (std::any_of(g.begin(), g.end(), [](const Token* t) { return numeric(*t); })) ++groups;
  }
  return groups >= 2;
}

bool plain_name(const Token& t) { return t.cls == TokenClass::name_token && !t.spelled; }

std::size_t longest_name_run(const Analysis& a) {
  std::size_t best = 0, run = 0;
  for (const auto& t : a.toks) {
    run = plain_name(t) ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

bool sig_name_reverse(const Analysis& a) {
  const auto& v = a.toks;
  for (std::size_t i = 0; i + 2 < v.size(); ++i) {
    if (!plain_name(v[i]) || (i > 0 && plain_name(v[i - 1]))) continue;
    if (!(v[i + 1].punct && v[i + 1].norm == ",")) continue;
    if (!plain_name(v[i + 2])) continue;
    if (i + 3 < v.size() && v[i + 3].cls == TokenClass::name_token) continue;
    return true;
  }
  return false;
}

using Signature = std::function<bool(const Analysis&)>;

const std::map<std::string, Signature, std::less<>>& signatures() {
  static const std::map<std::string, Signature, std::less<>> s = {
      {"filler_words", sig_filler},
      {"hesitation", sig_hesitation},
      {"correction", sig_correction},
      {"repetition", sig_repetition},
      {"pause", [](const Analysis& a) { return a.has("pause"); }},
      {"formal",
       [](const Analysis& a) {
         return (a.first_word() == "the" && (a.has("is") || a.has("are"))) || a.phrase("for the record") ||
                a.phrase("would like to state");
       }},
      {"casual",
       [](const Analysis& a) {
         std::string w = a.first_word();
         return w == "it's" || w == "its" || ((w == "sure" || w == "well") && a.has("it's"));
       }},
      {"polite", sig_polite},
      {"confident", sig_confident},
      {"uncertain", sig_uncertain},
      {"rushed", [](const Analysis& a) { return a.count_if([](const Token& t) { return t.glued; }) > 0; }},
      {"careful",
       [](const Analysis& a) { return a.has("carefully") || a.has("slowly") || a.has("careful"); }},
      {"confirmation",
       [](const Analysis& a) {
         std::string_view l = a.lower;
         return a.phrase("is that right") || a.phrase("is that correct") || l.ends_with("right?") ||
                l.ends_with("correct?");
       }},
      {"clarification",
       [](const Analysis& a) {
         return a.phrase("make sense") || a.phrase("makes sense") || a.has("clarify") || a.phrase("to be clear");
       }},
      {"direct_and_simple", sig_direct},
      {"brief_confirmation", [](const Analysis& a) { return a.has("yes") || a.has("yep") || a.has("yup"); }},
      {"concise_confirmation",
       [](const Analysis& a) {
         return a.has("confirmed") || a.first_word() == "correct" || std::string_view(a.lower).ends_with(", correct");
       }},

      {"digit_by_digit",
       [](const Analysis& a) { return a.only_digit_words() && a.digit_word_count() >= 5 && !a.has_literal(); }},
      {"grouped_two", [](const Analysis& a) { return !a.hundred && count_units(a, 2) >= 2; }},
      {"grouped_three", sig_grouped_three},
      {"hundred", [](const Analysis& a) { return a.hundred; }},
      {"mixed_grouping", [](const Analysis& a) { return count_units(a, 2) >= 1 && count_units(a, 1) >= 2; }},
      {"spoken_number_split",
       [](const Analysis& a) {
         return std::any_of(a.units.begin(), a.units.end(), [](const NumberUnit& u) { return u.split; });
       }},
      {"reversed", sig_reversed},
      {"with_pause", sig_with_pause},
      {"with_repetition", sig_repetition},
      {"with_correction", sig_correction},
      {"with_hesitation", [](const Analysis& a) { return a.ellipses_between_numbers() >= 3; }},
      {"with_filler", sig_with_filler},
      {"zip_formal",
       [](const Analysis& a) {
         return a.starts_with("the digits") || a.phrase("postal code") || a.phrase("on record");
       }},
      {"zip_casual", [](const Analysis& a) { return a.first_word() == "yeah" || a.first_word() == "zip's"; }},
      {"zip_polite", sig_polite},
      {"zip_confident", sig_confident},
      {"zip_uncertain", sig_uncertain},
      {"spelled_out", sig_spelled_out},

      {"date_as_4_digits", [](const Analysis& a) { return date_as(a, 4); }},
      {"spoken_date_4_digits", [](const Analysis& a) { return spoken_date(a, 4); }},
      {"date_as_5_digits", [](const Analysis& a) { return date_as(a, 5); }},
      {"spoken_date_5_digits", [](const Analysis& a) { return spoken_date(a, 5); }},
      {"date_as_6_digits", [](const Analysis& a) { return date_as(a, 6); }},
      {"spoken_date_6_digits", [](const Analysis& a) { return spoken_date(a, 6); }},
      {"date_as_8_digits", [](const Analysis& a) { return date_as(a, 8); }},
      {"spoken_date_8_digits", [](const Analysis& a) { return spoken_date(a, 8); }},
      {"spoken_month_day_year", sig_spoken_month},
      {"mixed_spoken_and_digits", sig_mixed_date},
      {"filler_or_correction", [](const Analysis& a) { return sig_filler(a) || sig_correction(a); }},
      {"casual_or_polite_digits", sig_casual_polite_digits},

      {"name_with_last", [](const Analysis& a) { return longest_name_run(a) >= 2; }},
      {"name_with_prefix",
       [](const Analysis& a) {
         return a.phrase("my name is") || a.phrase("my name's") || a.phrase("this is") || a.has("i'm") ||
                a.phrase("i am");
       }},
      {"name_reverse_order", sig_name_reverse},
      {"name_with_title", [](const Analysis& a) { return a.count_if([](const Token& t) { return t.title; }) > 0; }},
      {"name_with_middle", [](const Analysis& a) { return longest_name_run(a) >= 3; }},
      {"name_with_suffix", [](const Analysis& a) { return a.count_if([](const Token& t) { return t.suffix; }) > 0; }},
      {"name_with_initials",
       [](const Analysis& a) { return a.count_if([](const Token& t) { return t.initial; }) > 0; }},
      {"name_with_correction", sig_correction},
      {"name_partial_spelling",
       [](const Analysis& a) { return a.count_if([](const Token& t) { return t.spelled; }) > 0; }},
      {"name_with_apostrophe",
       [](const Analysis& a) {
         return a.count_if([](const Token& t) {
                  return plain_name(t) && t.surface.find('\'') != std::string::npos;
                }) > 0;
       }},
      {"name_hyphenated",
       [](const Analysis& a) {
         return a.count_if([](const Token& t) {
                  return plain_name(t) && t.surface.find('-') != std::string::npos;
                }) > 0;
       }},
      {"nickname",
       [](const Analysis& a) {
         return a.count_if([](const Token& t) {
                  return plain_name(t) && lexicon::formal_name_for(t.surface).has_value();
                }) > 0;
       }},
  };
  return s;
}

}  // namespace

std::set<std::string> classify_rule(std::string_view text, const EntityKind& kind, const VariationRegistry& registry) {
  Analysis a(text);
  std::set<std::string> out;
  for (const auto& entry : registry.for_kind(kind)) {
    auto it = signatures().find(entry.id);
    if (it != signatures().end() && it->second(a)) out.insert(entry.id);
  }
  if (out.empty()) out.insert(std::string(kNotListed));
  return out;
}

std::set<std::string> classify_with_provider(std::string_view text, const EntityKind& kind, ChatBackend& backend,
                                             const RetryPolicy& retry, const VariationRegistry& registry) {
  auto entries = registry.for_kind(kind);
  ChatRequest req = classification_request(kind, entries, text);
  auto tags = std::get<TagArray>(chat(backend, req, retry)).tags;
  std::set<std::string> out;
  for (const auto& t : tags) {
    bool known = std::any_of(entries.begin(), entries.end(), [&](const VariationType& e) { return e.id == t; });
    out.insert(known ? t : std::string(kNotListed));
  }
  if (out.size() > 1) out.erase(std::string(kNotListed));
  if (out.empty()) out.insert(std::string(kNotListed));
  return out;
}

std::set<std::string> classify(std::string_view text, const EntityKind& kind, ClassifyMode mode, ChatBackend* backend,
                               const VariationRegistry& registry) {
  if (mode == ClassifyMode::rule) return classify_rule(text, kind, registry);
  if (!backend) throw Error(ErrorCode::usage_error, "provider classification needs a chat backend");
  return classify_with_provider(text, kind, *backend, RetryPolicy{}, registry);
}

}  // namespace lingvar
