#include "lingvar/spoken_parser.hpp"

#include <algorithm>

#include "lingvar/text.hpp"

namespace lingvar {

using lexicon::NumberRole;

std::string_view to_string(TokenClass c) {
  switch (c) {
    case TokenClass::digit_word: return "digit_word";
    case TokenClass::number_word: return "number_word";
    case TokenClass::ordinal: return "ordinal";
    case TokenClass::month: return "month";
    case TokenClass::filler: return "filler";
    case TokenClass::correction_marker: return "correction_marker";
    case TokenClass::name_token: return "name_token";
    case TokenClass::other: return "other";
  }
  return "other";
}

namespace {

bool is_numeric(const Token& t) { return t.cls == TokenClass::digit_word || t.cls == TokenClass::number_word; }

bool is_value(const Token& t) {
  return is_numeric(t) || t.cls == TokenClass::ordinal || t.cls == TokenClass::month ||
         t.cls == TokenClass::name_token;
}

bool is_group_break(const Token& t) { return t.punct && (t.norm == "," || t.norm == ";"); }

std::string normalize_text(std::string_view in) {
  std::string s(in);
  s = text::replace_all(std::move(s), "\xE2\x80\x94", " , ");
  s = text::replace_all(std::move(s), "\xE2\x80\x93", " , ");
  s = text::replace_all(std::move(s), "\xE2\x80\xA6", " ... ");
  s = text::replace_all(std::move(s), "\xE2\x80\x99", "'");
  s = text::replace_all(std::move(s), "\xE2\x80\x98", "'");
  s = text::replace_all(std::move(s), "\xE2\x80\x9C", "\"");
  s = text::replace_all(std::move(s), "\xE2\x80\x9D", "\"");
  s = text::replace_all(std::move(s), " -- ", " , ");
  return s;
}

bool is_abbreviation(std::string_view word) {
  if (word.size() == 1) return text::is_alpha_ascii(word[0]);
  std::string lower = text::to_lower(word);
  return lower == "mr" || lower == "mrs" || lower == "ms" || lower == "mx" || lower == "dr" || lower == "jr" ||
         lower == "sr" || lower == "st" || lower == "prof";
}

struct Piece {
  std::string text;
  bool punct = false;
  bool ellipsis = false;
};

std::vector<Piece> scan(const std::string& s) {
  std::vector<Piece> pieces;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) pieces.push_back({cur, false, false});
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      flush();
    } else if (c == ',' || c == ';' || c == ':' || c == '?' || c == '!') {
      flush();
      pieces.push_back({std::string(1, c), true, false});
    } else if (c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == '"' || c == '*') {
      flush();
    } else if (c == '.') {
      std::size_t run = 1;
      while (i + run < s.size() && s[i + run] == '.') ++run;
      if (run >= 2) {
        flush();
        pieces.push_back({"...", true, true});
        i += run - 1;
      } else if (!cur.empty() && is_abbreviation(cur)) {
        cur.push_back('.');
      } else if (!cur.empty() && text::is_digits(cur) && i + 1 < s.size() && s[i + 1] >= '0' && s[i + 1] <= '9') {
        cur.push_back('/');
      } else {
        flush();
        pieces.push_back({".", true, false});
      }
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return pieces;
}

bool is_name_shape(std::string_view w) {
  if (w.size() < 2 || !text::is_upper_ascii(w[0])) return false;
  int letters = 0;
  for (unsigned char c : w) {
    if (text::is_alpha_ascii(static_cast<char>(c)) || c >= 0x80) {
      ++letters;
    } else if (c != '\'' && c != '-') {
      return false;
    }
  }
  return letters >= 2;
}

bool is_hyphenated_name(std::string_view w) {
  auto parts = text::split(w, '-');
  if (parts.size() < 2 || !is_name_shape(parts[0])) return false;
  for (const auto& p : parts) {
    if (p.size() < 2 || !text::is_alpha_ascii(p[0])) return false;
    for (char c : p) {
      if (!text::is_alpha_ascii(c) && c != '\'') return false;
    }
    if (lexicon::number_word(text::to_lower(p))) return false;
  }
  return true;
}

// "JohnSmith" -> {"John", "Smith"}; empty when the word is not camel-joined.
std::vector<std::string> camel_parts(std::string_view w) {
  if (w.size() < 4 || !text::is_upper_ascii(w[0])) return {};
  std::vector<std::string> parts;
  std::string cur(1, w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) {
    char c = w[i];
    if (!text::is_alpha_ascii(c) && c != '\'') return {};
    if (text::is_upper_ascii(c) && text::is_lower_ascii(w[i - 1])) {
      parts.push_back(cur);
      cur.clear();
    }
    cur.push_back(c);
  }
  parts.push_back(cur);
  if (parts.size() < 2) return {};
  for (const auto& p : parts) {
    if (p.size() < 2) return {};
  }
  return parts;
}

class Tokenizer {
 public:
  Tokenizer(const ParseOptions& opts) : opts_(opts) {}

  TokenStream run(std::string_view input) {
    std::string norm = normalize_text(input);
    for (const Piece& p : scan(norm)) {
      if (p.punct) {
        Token t;
        t.surface = p.text;
        t.norm = p.text;
        t.punct = true;
        t.ellipsis = p.ellipsis;
        t.word = word_;
        out_.tokens.push_back(std::move(t));
      } else {
        word(p.text);
      }
      ++word_;
    }
    merge_phrases();
    resolve_context();
    return std::move(out_);
  }

 private:
  void word(std::string w) {
    while (w.size() > 1 && (w.front() == '\'' || w.front() == '-')) w.erase(w.begin());
    while (w.size() > 1 && (w.back() == '\'' || w.back() == '-')) w.pop_back();
    if (w.empty() || w == "'" || w == "-") return;
    if (w.find('-') != std::string::npos || w.find('/') != std::string::npos) {
      std::vector<std::string> parts;
      std::string cur;
      for (char c : w) {
        if (c == '-' || c == '/') {
          if (!cur.empty()) parts.push_back(cur);
          cur.clear();
        } else {
          cur.push_back(c);
        }
      }
      if (!cur.empty()) parts.push_back(cur);
      bool letters = parts.size() >= 2;
      for (const auto& p : parts) letters = letters && p.size() == 1 && text::is_alpha_ascii(p[0]);
      if (letters) {
        Token t = base(w);
        t.cls = TokenClass::name_token;
        t.spelled = true;
        t.norm.clear();
        for (const auto& p : parts) t.norm += text::to_lower(p);
        out_.tokens.push_back(std::move(t));
        return;
      }
      if (w.find('/') == std::string::npos && is_hyphenated_name(w)) {
        simple(w, false);
        return;
      }
      for (std::size_t i = 0; i < parts.size(); ++i) simple(parts[i], i > 0);
      return;
    }
    simple(w, false);
  }

  Token base(const std::string& w) const {
    Token t;
    t.surface = w;
    t.norm = text::to_lower(w);
    t.word = word_;
    return t;
  }

  void simple(const std::string& w, bool hyphen_part) {
    Token t = base(w);
    t.hyphen_part = hyphen_part;
    const std::string& lower = t.norm;
    if (text::is_digits(lower)) {
      t.cls = TokenClass::number_word;
      t.role = NumberRole::literal;
      t.value = lower.size() <= 9 ? std::stoi(lower) : -1;
    } else if (auto ord = lexicon::arabic_ordinal(lower)) {
      t.cls = TokenClass::ordinal;
      t.value = *ord;
    } else if (auto nw = lexicon::number_word(lower)) {
      if (nw->role == NumberRole::multiplier && !opts_.expand_multipliers) {
        t.cls = TokenClass::other;
      } else {
        t.cls = nw->role == NumberRole::unit ? TokenClass::digit_word : TokenClass::number_word;
        t.role = nw->role;
        t.value = nw->value;
      }
    } else if (lower == "oh") {
      t.cls = TokenClass::filler;  // revisited once neighbours are known
    } else if (auto ord = lexicon::ordinal_word(lower)) {
      t.cls = TokenClass::ordinal;
      t.value = *ord;
    } else if (auto m = lexicon::month_word(lower)) {
      t.cls = TokenClass::month;
      t.value = *m;
    } else if (lexicon::is_filler(lower)) {
      t.cls = TokenClass::filler;
    } else if (lower == "no" || lower == "wait" || lower == "sorry") {
      t.cls = TokenClass::correction_marker;
    } else if (lexicon::is_title(lower)) {
      t.title = true;
    } else if (lexicon::is_suffix(lower) && (w.back() == '.' || text::is_upper_ascii(w[0]))) {
      t.suffix = true;
    } else if (w.size() == 2 && text::is_upper_ascii(w[0]) && w[1] == '.') {
      t.initial = true;
    } else if (auto parts = lexicon::segment_number_words(lower)) {
      for (const auto& p : *parts) {
        Token g = base(p);
        g.glued = true;
        if (p == "oh") {
          g.cls = TokenClass::digit_word;
          g.role = NumberRole::unit;
          g.value = 0;
        } else {
          auto nw = lexicon::number_word(p);
          g.cls = nw->role == NumberRole::unit ? TokenClass::digit_word : TokenClass::number_word;
          g.role = nw->role;
          g.value = nw->value;
        }
        out_.tokens.push_back(std::move(g));
      }
      return;
    } else if (auto camel = camel_parts(w); !camel.empty()) {
      for (const auto& p : camel) {
        Token g = base(p);
        g.glued = true;
        g.cls = is_name_shape(p) && !lexicon::is_name_stopword(text::to_lower(p)) ? TokenClass::name_token
                                                                                   : TokenClass::other;
        out_.tokens.push_back(std::move(g));
      }
      return;
    } else if (is_name_shape(w) && !lexicon::is_name_stopword(lower)) {
      t.cls = TokenClass::name_token;
    }
    out_.tokens.push_back(std::move(t));
  }

  void merge_phrases() {
    auto& v = out_.tokens;
    std::vector<Token> merged;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i + 1 < v.size() && !v[i].punct && !v[i + 1].punct) {
        const std::string& a = v[i].norm;
        const std::string& b = v[i + 1].norm;
        if (a == "you" && b == "know") {
          Token t = v[i];
          t.surface += " " + v[i + 1].surface;
          t.norm = "you know";
          t.cls = TokenClass::filler;
          merged.push_back(std::move(t));
          ++i;
          continue;
        }
        if ((a == "i" && b == "mean") || (a == "no" && b == "wait")) {
          Token t = v[i];
          t.surface += " " + v[i + 1].surface;
          t.norm = a + " " + b;
          t.cls = TokenClass::correction_marker;
          merged.push_back(std::move(t));
          ++i;
          continue;
        }
      }
      merged.push_back(std::move(v[i]));
    }
    v = std::move(merged);
  }

  void resolve_context() {
    auto& v = out_.tokens;
    // "oh" reads as zero only beside another number.
    if (opts_.oh_as_zero) {
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (v[i].norm != "oh" || v[i].cls != TokenClass::filler) continue;
          bool left = i > 0 && is_numeric(v[i - 1]);
          bool right = i + 1 < v.size() && is_numeric(v[i + 1]);
          if (left || right) {
            v[i].cls = TokenClass::digit_word;
            v[i].role = NumberRole::unit;
            v[i].value = 0;
            changed = true;
          }
        }
      }
    }
    // Lowercase "may" is a month only in front of a day.
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].cls == TokenClass::month && v[i].norm == "may" && v[i].surface[0] == 'm') {
        bool day_next = i + 1 < v.size() && (is_numeric(v[i + 1]) || v[i + 1].cls == TokenClass::ordinal);
        if (!day_next) v[i].cls = TokenClass::other;
      }
    }
  }

  const ParseOptions& opts_;
  TokenStream out_;
  std::size_t word_ = 0;
};

std::vector<std::string> value_norms(const std::vector<Token>& v, std::size_t from, std::size_t to) {
  std::vector<std::string> out;
  for (std::size_t i = from; i < to; ++i) {
    if (is_value(v[i])) out.push_back(v[i].norm);
  }
  return out;
}

bool collapse_once(std::vector<Token>& v) {
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end)
  std::size_t start = 0;
  for (std::size_t i = 0; i <= v.size(); ++i) {
    if (i == v.size() || is_group_break(v[i])) {
      groups.emplace_back(start, i);
      start = i + 1;
    }
  }
  for (std::size_t g = 1; g < groups.size(); ++g) {
    auto prev = value_norms(v, groups[g - 1].first, groups[g - 1].second);
    auto cur = value_norms(v, groups[g].first, groups[g].second);
    if (!prev.empty() && prev == cur) {
      // drop the separator in front of the repeated group together with it
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(groups[g].first - 1),
              v.begin() + static_cast<std::ptrdiff_t>(groups[g].second));
      return true;
    }
  }
  return false;
}

struct Group {
  std::string literal;
  long long value = 0;
  bool is_literal = false;
  NumberRole open = NumberRole::none;  // tens, hundred or thousand when still extendable
};

std::string assemble_range(const std::vector<Token>& v, std::size_t from, std::size_t to) {
  std::vector<Group> groups;
  std::ptrdiff_t last = -2;
  bool and_pending = false;
  int mult = 0;
  for (std::size_t idx = from; idx < to; ++idx) {
    const Token& t = v[idx];
    const auto i = static_cast<std::ptrdiff_t>(idx);
    if (!is_numeric(t)) {
      if (t.norm == "and" && !groups.empty() && last == i - 1 &&
          (groups.back().open == NumberRole::hundred || groups.back().open == NumberRole::thousand)) {
        and_pending = true;
        last = i;
      } else {
        mult = 0;
      }
      continue;
    }
    const bool adj = last == i - 1;
    last = i;
    Group* g = groups.empty() ? nullptr : &groups.back();
    const bool joinable = (adj || and_pending) && g != nullptr && !g->is_literal;
    switch (t.role) {
      case NumberRole::multiplier:
        mult = t.value;
        break;
      case NumberRole::unit:
        if (mult > 0) {
          groups.push_back({std::string(static_cast<std::size_t>(mult), static_cast<char>('0' + t.value)), 0, true,
                            NumberRole::none});
          mult = 0;
        } else if (joinable && adj && g->open == NumberRole::tens && t.value >= 1) {
          g->value += t.value;
          g->open = NumberRole::none;
        } else if (joinable && and_pending && g->open == NumberRole::hundred) {
          g->value += t.value;
          g->open = NumberRole::none;
        } else if (joinable && g->open == NumberRole::thousand) {
          g->value += t.value;
          g->open = NumberRole::none;
        } else {
          groups.push_back({"", t.value, false, NumberRole::none});
        }
        break;
      case NumberRole::teen:
        if (joinable && (g->open == NumberRole::hundred || g->open == NumberRole::thousand)) {
          g->value += t.value;
          g->open = NumberRole::none;
        } else {
          groups.push_back({"", t.value, false, NumberRole::none});
        }
        break;
      case NumberRole::tens:
        if (joinable && (g->open == NumberRole::hundred || g->open == NumberRole::thousand)) {
          g->value += t.value;
          g->open = NumberRole::tens;
        } else {
          groups.push_back({"", t.value, false, NumberRole::tens});
        }
        break;
      case NumberRole::hundred:
        if (adj && g && !g->is_literal && g->value >= 1 && g->value <= 99 &&
            (g->open == NumberRole::none || g->open == NumberRole::tens)) {
          g->value *= 100;
          g->open = NumberRole::hundred;
        } else {
          groups.push_back({"", 100, false, NumberRole::hundred});
        }
        break;
      case NumberRole::thousand:
        if (adj && g && !g->is_literal && g->value >= 1 && g->value <= 999 && g->open != NumberRole::thousand) {
          g->value *= 1000;
          g->open = NumberRole::thousand;
        } else {
          groups.push_back({"", 1000, false, NumberRole::thousand});
        }
        break;
      case NumberRole::literal:
        groups.push_back({t.surface, 0, true, NumberRole::none});
        break;
      case NumberRole::none:
        break;
    }
    and_pending = false;
  }
  std::string out;
  for (const auto& g : groups) out += g.is_literal ? g.literal : std::to_string(g.value);
  return out;
}

bool has_reversal_cue(const std::vector<Token>& v) {
  return std::any_of(v.begin(), v.end(), [](const Token& t) { return lexicon::is_reversal_cue(t.norm); });
}

std::optional<EntityValue> extract_zip(std::string_view text, const ParseOptions& o) {
  TokenStream s = resolve_corrections(tokenize(text, o), o);
  std::string digits = assemble_digits(s, o);
  if (o.honor_reversal_cues && has_reversal_cue(s.tokens)) std::reverse(digits.begin(), digits.end());
  if (digits.size() < 5) return std::nullopt;
  std::string zip = digits.substr(0, 5);
  return EntityValue{EntityKind::zip_code(), zip, zip};
}

struct DayParse {
  int day = 0;
  std::size_t next = 0;
};

std::optional<DayParse> parse_day_at(const std::vector<Token>& v, std::size_t i) {
  while (i < v.size() && (v[i].norm == "the" || v[i].norm == "of")) ++i;
  if (i >= v.size()) return std::nullopt;
  const Token& t = v[i];
  auto adjacent = [&](std::size_t k) { return k < v.size() && !v[k].punct; };
  if (t.cls == TokenClass::ordinal) return DayParse{t.value, i + 1};
  if (t.role == NumberRole::tens) {
    if (adjacent(i + 1) && v[i + 1].cls == TokenClass::ordinal && v[i + 1].value <= 9) {
      return DayParse{t.value + v[i + 1].value, i + 2};
    }
    if (adjacent(i + 1) && v[i + 1].role == NumberRole::unit && v[i + 1].value >= 1) {
      return DayParse{t.value + v[i + 1].value, i + 2};
    }
    return DayParse{t.value, i + 1};
  }
  if (t.role == NumberRole::teen) return DayParse{t.value, i + 1};
  if (t.role == NumberRole::unit) {
    if (adjacent(i + 1) && v[i + 1].role == NumberRole::unit && t.value <= 3) {
      int two = t.value * 10 + v[i + 1].value;
      if (two >= 1 && two <= 31) return DayParse{two, i + 2};
    }
    return DayParse{t.value, i + 1};
  }
  if (t.role == NumberRole::literal && t.surface.size() <= 2) return DayParse{t.value, i + 1};
  return std::nullopt;
}

std::optional<EntityValue> extract_dob(std::string_view text, const ParseOptions& o) {
  TokenStream s = resolve_corrections(tokenize(text, o), o);
  const auto& v = s.tokens;
  const int ref = o.reference_year > 0 ? o.reference_year : current_year();
  auto month_it = std::find_if(v.begin(), v.end(), [](const Token& t) { return t.cls == TokenClass::month; });
  if (month_it != v.end()) {
    auto m = static_cast<std::size_t>(month_it - v.begin());
    std::optional<DayParse> day = parse_day_at(v, m + 1);
    std::size_t year_from = day ? day->next : m + 1;
    if (!day) {
      std::size_t k = m;
      while (k > 0 && (v[k - 1].norm == "of" || v[k - 1].norm == "the")) --k;
      if (k > 0 && v[k - 1].cls == TokenClass::ordinal) day = DayParse{v[k - 1].value, m + 1};
    }
    if (day) {
      std::string year_digits = assemble_range(v, year_from, v.size());
      int year = -1;
      if (year_digits.size() == 4) year = std::stoi(year_digits);
      if (year_digits.size() == 2) year = expand_two_digit_year(std::stoi(year_digits), ref);
      CalendarDate d{year, month_it->value, day->day};
      if (year > 0 && is_valid_date(d)) {
        std::string c = format_date(d);
        return EntityValue{EntityKind::date_of_birth(), c, c};
      }
    }
  }
  std::string digits = assemble_digits(s, o);
  if (auto d = decode_date_digits(digits, ref)) {
    return EntityValue{EntityKind::date_of_birth(), format_date(*d), digits};
  }
  return std::nullopt;
}

std::string name_surface(const Token& t) {
  if (t.spelled) return text::title_case(t.norm);
  return text::title_case(t.surface);
}

}  // namespace

TokenStream tokenize(std::string_view text, const ParseOptions& options) { return Tokenizer(options).run(text); }

TokenStream resolve_corrections(const TokenStream& stream, const ParseOptions& options) {
  const auto& in = stream.tokens;
  std::vector<Token> out;
  std::vector<bool> dropped;
  std::vector<std::size_t> run;
  std::size_t i = 0;
  while (i < in.size()) {
    const Token& t = in[i];
    if (t.cls == TokenClass::correction_marker && options.resolve_corrections) {
      std::size_t j = i + 1;
      while (j < in.size() && (in[j].punct || in[j].cls == TokenClass::correction_marker)) ++j;
      std::size_t r = 0;
      bool special = false;
      for (std::size_t k = j; k < in.size() && in[k].cls != TokenClass::correction_marker; ++k) {
        if (!is_value(in[k])) continue;
        ++r;
        special = special || in[k].cls == TokenClass::month || in[k].cls == TokenClass::name_token;
      }
      for (std::size_t idx : run) {
        special = special || out[idx].cls == TokenClass::month || out[idx].cls == TokenClass::name_token;
      }
      if (r > 0 && !run.empty()) {
        if (r > run.size() || special) {
          for (std::size_t idx : run) dropped[idx] = true;
        } else {
          dropped[run.back()] = true;
        }
      }
      run.clear();
      for (std::size_t k = i; k < j; ++k) {
        if (in[k].punct) {
          out.push_back(in[k]);
          dropped.push_back(false);
        }
      }
      i = j;
      continue;
    }
    out.push_back(t);
    dropped.push_back(false);
    if (is_value(t)) run.push_back(out.size() - 1);
    ++i;
  }
  TokenStream result;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!dropped[k]) result.tokens.push_back(std::move(out[k]));
  }
  if (options.collapse_repetitions) {
    while (collapse_once(result.tokens)) {
    }
  }
  return result;
}

std::string assemble_digits(const TokenStream& resolved, const ParseOptions&) {
  return assemble_range(resolved.tokens, 0, resolved.tokens.size());
}

std::string parse_number_words(std::string_view text, const ParseOptions& options) {
  return assemble_digits(resolve_corrections(tokenize(text, options), options), options);
}

std::optional<std::string> find_given_name(std::string_view text, const ParseOptions& options) {
  TokenStream s = resolve_corrections(tokenize(text, options), options);
  const auto& v = s.tokens;
  auto finish = [&](std::string name) -> std::optional<std::string> {
    if (options.map_nicknames) {
      if (auto formal = lexicon::formal_name_for(name)) return *formal;
    }
    return name;
  };
  for (std::size_t i = 0; i + 2 < v.size(); ++i) {
    if (v[i].norm == "first" && v[i + 1].norm == "name") {
      std::size_t j = i + 2;
      while (j < v.size() && (v[j].punct || v[j].norm == "is" || v[j].norm == "was")) ++j;
      if (j < v.size() && v[j].cls == TokenClass::name_token) return finish(name_surface(v[j]));
    }
  }
  std::vector<std::size_t> names;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].cls != TokenClass::name_token) continue;
    if (i > 0 && v[i - 1].initial) continue;
    names.push_back(i);
  }
  if (names.empty()) {
    bool any_name_like = std::any_of(v.begin(), v.end(), [](const Token& t) {
      return t.initial || t.cls == TokenClass::name_token;
    });
    if (any_name_like) return std::nullopt;
    for (const Token& t : v) {
      if (t.punct || t.cls != TokenClass::other || t.title || t.suffix) continue;
      if (t.norm.size() < 2 || lexicon::is_name_stopword(t.norm)) continue;
      bool alpha = std::all_of(t.norm.begin(), t.norm.end(), [](char c) {
        return text::is_alpha_ascii(c) || c == '\'' || c == '-';
      });
      if (alpha) return finish(text::title_case(t.norm));
    }
    return std::nullopt;
  }
  std::size_t first = names.front();
  if (first + 2 < v.size() && is_group_break(v[first + 1]) && v[first + 2].cls == TokenClass::name_token) {
    std::size_t after = first + 3;
    if (after >= v.size() || v[after].cls != TokenClass::name_token) return finish(name_surface(v[first + 2]));
  }
  return finish(name_surface(v[first]));
}

std::optional<EntityValue> extract(const EntityKind& kind, std::string_view text, const ParseOptions& options) {
  switch (kind.builtin()) {
    case EntityKind::Builtin::zip_code: return extract_zip(text, options);
    case EntityKind::Builtin::date_of_birth: return extract_dob(text, options);
    case EntityKind::Builtin::person_name: {
      auto n = find_given_name(text, options);
      if (!n) return std::nullopt;
      // Only names that canonicalize to themselves count as extracted.
      ParseOptions plain = options;
      plain.map_nicknames = false;
      auto again = find_given_name(*n, plain);
      if (!again || *again != *n) return std::nullopt;
      return EntityValue{kind, *n, *n};
    }
    case EntityKind::Builtin::extension: break;
  }
  return std::nullopt;
}

std::optional<EntityValue> extract(const FieldSpec& spec, std::string_view text, const ParseOptions& options) {
  return extract(spec.kind, text, options);
}

}  // namespace lingvar
