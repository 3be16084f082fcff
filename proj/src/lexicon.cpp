#include "lingvar/lexicon.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "lingvar/text.hpp"

namespace lingvar::lexicon {
namespace {

constexpr std::array<std::string_view, 10> kUnits = {"zero", "one", "two", "three", "four",
                                                      "five", "six", "seven", "eight", "nine"};
constexpr std::array<std::string_view, 10> kTeens = {"ten",     "eleven",  "twelve",    "thirteen", "fourteen",
                                                      "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
constexpr std::array<std::string_view, 10> kTens = {"", "", "twenty", "thirty", "forty",
                                                     "fifty", "sixty", "seventy", "eighty", "ninety"};
constexpr std::array<std::string_view, 32> kOrdinals = {
    "",           "first",       "second",     "third",        "fourth",      "fifth",       "sixth",
    "seventh",    "eighth",      "ninth",      "tenth",        "eleventh",    "twelfth",     "thirteenth",
    "fourteenth", "fifteenth",   "sixteenth",  "seventeenth",  "eighteenth",  "nineteenth",  "twentieth",
    "twenty-first", "twenty-second", "twenty-third", "twenty-fourth", "twenty-fifth", "twenty-sixth",
    "twenty-seventh", "twenty-eighth", "twenty-ninth", "thirtieth", "thirty-first"};
constexpr std::array<std::string_view, 12> kMonths = {"January", "February", "March",     "April",   "May",      "June",
                                                       "July",    "August",   "September", "October", "November", "December"};

const std::map<std::string, std::string, std::less<>>& nickname_map() {
  static const std::map<std::string, std::string, std::less<>> m = {
      {"johnny", "John"},     {"jack", "John"},       {"mike", "Michael"},    {"mikey", "Michael"},
      {"bob", "Robert"},      {"bobby", "Robert"},    {"rob", "Robert"},      {"robbie", "Robert"},
      {"bill", "William"},    {"billy", "William"},   {"liam", "William"},    {"liz", "Elizabeth"},
      {"beth", "Elizabeth"},  {"betty", "Elizabeth"}, {"jim", "James"},       {"jimmy", "James"},
      {"dick", "Richard"},    {"rick", "Richard"},    {"rich", "Richard"},    {"tom", "Thomas"},
      {"tommy", "Thomas"},    {"dave", "David"},      {"davy", "David"},      {"dan", "Daniel"},
      {"danny", "Daniel"},    {"joe", "Joseph"},      {"joey", "Joseph"},     {"chris", "Christopher"},
      {"matt", "Matthew"},    {"tony", "Anthony"},    {"andy", "Andrew"},     {"drew", "Andrew"},
      {"steve", "Steven"},    {"ed", "Edward"},       {"eddie", "Edward"},    {"ted", "Theodore"},
      {"sam", "Samuel"},      {"ben", "Benjamin"},    {"nick", "Nicholas"},   {"alex", "Alexander"},
      {"kate", "Katherine"},  {"katie", "Katherine"}, {"jenny", "Jennifer"},  {"jen", "Jennifer"},
      {"sue", "Susan"},       {"susie", "Susan"},     {"peggy", "Margaret"},  {"maggie", "Margaret"},
      {"patty", "Patricia"},  {"trish", "Patricia"},  {"debbie", "Deborah"},  {"vicky", "Victoria"},
      {"becky", "Rebecca"},   {"abby", "Abigail"},    {"mandy", "Amanda"},    {"cindy", "Cynthia"},
  };
  return m;
}

const std::set<std::string, std::less<>>& stopwords() {
  static const std::set<std::string, std::less<>> s = {
      "a", "about", "absolutely", "actually", "am", "an", "and", "are", "as", "at", "be", "because", "been",
      "believe", "but", "by", "call", "can", "careful", "carefully", "certainly", "clarify", "clear", "code",
      "confirm", "confirmed", "correct", "date", "definitely", "did", "do", "does", "down", "er", "erm",
      "everyone", "file", "first", "for", "full", "go", "goes", "going", "gonna", "good", "guess", "have",
      "he", "hello", "her", "here", "hey", "hi", "him", "his", "hmm", "i", "i'd", "i'll", "i'm", "i've",
      "in", "is", "it", "it's", "its", "just", "know", "last", "let", "let's", "like", "make", "maybe", "me",
      "mean", "my", "name", "name's", "names", "no", "not", "note", "now", "of", "ok", "okay", "on", "or",
      "our", "pause", "patient", "please", "probably", "put", "quick", "quickly", "record", "right", "said",
      "say", "sense", "she", "slowly", "so", "sorry", "speaking", "spell", "spelled", "sure", "thank",
      "thanks", "that", "that's", "the", "their", "them", "then", "there", "they", "think", "this", "to",
      "uh", "uhm", "um", "umm", "us", "wait", "was", "we", "well", "what", "what's", "when", "where",
      "which", "who", "will", "with", "would", "yeah", "yep", "yes", "you", "your", "yup", "account",
      "on", "as", "hold", "there's", "here's", "nope", "oh", "again", "once", "more", "also", "very",
      "exactly", "really", "yours", "mine", "person", "caller", "surname", "given", "middle", "family",
      "spelling", "letters", "letter", "verify", "verified", "sir", "madam", "ma'am", "correction",
  };
  return s;
}

const std::vector<GivenName> kGiven = {
    {"John", false},    {"Michael", false}, {"Robert", false},  {"William", false}, {"James", false},
    {"David", false},   {"Richard", false}, {"Thomas", false},  {"Daniel", false},  {"Joseph", false},
    {"Matthew", false}, {"Anthony", false}, {"Andrew", false},  {"Steven", false},  {"Edward", false},
    {"Samuel", false},  {"Benjamin", false}, {"Nicholas", false}, {"Alexander", false}, {"Henry", false},
    {"George", false},  {"Peter", false},   {"Paul", false},    {"Mark", false},    {"Brian", false},
    {"Mary", true},     {"Elizabeth", true}, {"Jennifer", true}, {"Linda", true},    {"Susan", true},
    {"Margaret", true}, {"Patricia", true}, {"Sarah", true},    {"Karen", true},    {"Nancy", true},
    {"Laura", true},    {"Emily", true},    {"Rebecca", true},  {"Victoria", true}, {"Amanda", true},
    {"Rachel", true},   {"Hannah", true},   {"Olivia", true},   {"Sophia", true},   {"Grace", true},
    {"Katherine", true}, {"Deborah", true}, {"Cynthia", true},  {"Abigail", true},  {"Helen", true},
};

const std::vector<std::string_view> kSurnames = {
    "Smith",    "Johnson",  "Williams", "Brown",    "Jones",    "Garcia",   "Miller",   "Davis",
    "Rodriguez", "Martinez", "Hernandez", "Lopez",  "Gonzalez", "Wilson",   "Anderson", "Taylor",
    "Moore",    "Jackson",  "Martin",   "Lee",      "Thompson", "White",    "Harris",   "Clark",
    "Lewis",    "Robinson", "Walker",   "Young",    "Allen",    "King",     "Wright",   "Scott",
    "Torres",   "Nguyen",   "Hill",     "Flores",   "Green",    "Adams",    "Nelson",   "Baker",
    "Hall",     "Rivera",   "Campbell", "Mitchell", "Carter",   "Roberts",  "O'Connor", "O'Brien",
    "D'Angelo", "O'Neil",
};

const std::vector<std::string_view> kApostrophe = {"O'Connor", "O'Brien", "D'Angelo", "O'Neil"};

}  // namespace

std::optional<NumberWord> number_word(std::string_view w) {
  for (int i = 0; i < 10; ++i) {
    if (w == kUnits[i]) return NumberWord{NumberRole::unit, i};
  }
  for (int i = 0; i < 10; ++i) {
    if (w == kTeens[i]) return NumberWord{NumberRole::teen, 10 + i};
  }
  for (int i = 2; i < 10; ++i) {
    if (w == kTens[i]) return NumberWord{NumberRole::tens, i * 10};
  }
  if (w == "hundred") return NumberWord{NumberRole::hundred, 100};
  if (w == "thousand") return NumberWord{NumberRole::thousand, 1000};
  if (w == "double") return NumberWord{NumberRole::multiplier, 2};
  if (w == "triple") return NumberWord{NumberRole::multiplier, 3};
  return std::nullopt;
}

std::optional<int> ordinal_word(std::string_view w) {
  for (int i = 1; i <= 20; ++i) {
    if (w == kOrdinals[i]) return i;
  }
  if (w == "thirtieth") return 30;
  return std::nullopt;
}

std::optional<int> arabic_ordinal(std::string_view w) {
  if (w.size() < 3 || w.size() > 4) return std::nullopt;
  std::string_view num = w.substr(0, w.size() - 2);
  std::string_view suf = w.substr(w.size() - 2);
  if (!text::is_digits(num)) return std::nullopt;
  if (suf != "st" && suf != "nd" && suf != "rd" && suf != "th") return std::nullopt;
  int v = 0;
  for (char c : num) v = v * 10 + (c - '0');
  if (v < 1 || v > 31) return std::nullopt;
  return v;
}

std::optional<int> month_word(std::string_view w) {
  for (int i = 0; i < 12; ++i) {
    if (w == text::to_lower(kMonths[i])) return i + 1;
  }
  static const std::array<std::pair<std::string_view, int>, 11> abbrev = {{{"jan", 1},
                                                                            {"feb", 2},
                                                                            {"apr", 4},
                                                                            {"aug", 8},
                                                                            {"sep", 9},
                                                                            {"sept", 9},
                                                                            {"oct", 10},
                                                                            {"nov", 11},
                                                                            {"dec", 12},
                                                                            {"jun", 6},
                                                                            {"jul", 7}}};
  for (auto& [a, m] : abbrev) {
    if (w == a) return m;
  }
  return std::nullopt;
}

std::string_view unit_name(int d) { return kUnits.at(static_cast<std::size_t>(d)); }
std::string_view teen_name(int v) { return kTeens.at(static_cast<std::size_t>(v - 10)); }
std::string_view tens_name(int v) { return kTens.at(static_cast<std::size_t>(v / 10)); }
std::string_view ordinal_name(int v) { return kOrdinals.at(static_cast<std::size_t>(v)); }
std::string_view month_name(int m) { return kMonths.at(static_cast<std::size_t>(m - 1)); }

std::string two_digit_words(int v) {
  if (v < 10) return std::string(unit_name(v));
  if (v < 20) return std::string(teen_name(v));
  std::string out(tens_name(v - v % 10));
  if (v % 10) {
    out += "-";
    out += unit_name(v % 10);
  }
  return out;
}

bool is_filler(std::string_view w) {
  return w == "um" || w == "uh" || w == "uhm" || w == "umm" || w == "er" || w == "erm" || w == "hmm" ||
         w == "you know";
}

bool is_title(std::string_view w) {
  static const std::set<std::string, std::less<>> t = {"mr", "mr.", "mrs", "mrs.", "ms", "ms.", "mx", "mx.",
                                                       "dr", "dr.", "miss", "mister", "doctor", "prof",
                                                       "prof.", "professor"};
  return t.count(w) > 0;
}

bool is_suffix(std::string_view w) {
  static const std::set<std::string, std::less<>> s = {"jr", "jr.", "sr", "sr.", "ii", "iii", "iv"};
  return s.count(w) > 0;
}

bool is_name_stopword(std::string_view w) { return stopwords().count(w) > 0; }

bool is_reversal_cue(std::string_view w) {
  return w == "backwards" || w == "backward" || w == "reverse" || w == "reversed";
}

std::optional<std::string> formal_name_for(std::string_view nickname) {
  const auto& m = nickname_map();
  auto it = m.find(text::to_lower(nickname));
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> nickname_for(std::string_view formal) {
  for (const auto& [nick, full] : nickname_map()) {
    if (full == formal) return text::title_case(nick);
  }
  return std::nullopt;
}

const std::vector<GivenName>& given_names() { return kGiven; }
const std::vector<std::string_view>& surnames() { return kSurnames; }
const std::vector<std::string_view>& apostrophe_surnames() { return kApostrophe; }

std::optional<std::vector<std::string>> segment_number_words(std::string_view w) {
  // best[i]: fewest-pieces segmentation of w[0..i), -1 when impossible
  const std::size_t n = w.size();
  std::vector<int> best(n + 1, -1), prev(n + 1, -1);
  best[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (best[i] < 0) continue;
    for (std::size_t len = 2; i + len <= n && len <= 9; ++len) {
      std::string_view piece = w.substr(i, len);
      bool known = number_word(piece).has_value() || piece == "oh";
      if (!known) continue;
      if (best[i + len] < 0 || best[i] + 1 < best[i + len]) {
        best[i + len] = best[i] + 1;
        prev[i + len] = static_cast<int>(i);
      }
    }
  }
  if (best[n] < 2) return std::nullopt;
  std::vector<std::string> parts;
  for (std::size_t at = n; at > 0; at = static_cast<std::size_t>(prev[at])) {
    parts.emplace_back(w.substr(static_cast<std::size_t>(prev[at]), at - static_cast<std::size_t>(prev[at])));
  }
  std::reverse(parts.begin(), parts.end());
  return parts;
}

}  // namespace lingvar::lexicon
