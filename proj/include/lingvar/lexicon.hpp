#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lingvar::lexicon {

enum class NumberRole { none, unit, teen, tens, hundred, thousand, multiplier, literal };

struct NumberWord {
  NumberRole role = NumberRole::none;
  int value = 0;
};

// Cardinal lookup on a lowercase word; "oh" is not included (context dependent).
std::optional<NumberWord> number_word(std::string_view lower);
// Ordinal words first..thirty-first as single words (twentieth, thirtieth included).
std::optional<int> ordinal_word(std::string_view lower);
// Arabic ordinal such as "2nd", "21st".
std::optional<int> arabic_ordinal(std::string_view lower);
std::optional<int> month_word(std::string_view lower);

std::string_view unit_name(int d);            // 0..9
std::string_view teen_name(int v);            // 10..19
std::string_view tens_name(int v);            // 20,30,..,90
std::string_view ordinal_name(int v);         // 1..31
std::string_view month_name(int m);           // 1..12, capitalized
std::string two_digit_words(int v);           // 10..99, hyphenated compounds

bool is_filler(std::string_view lower);
bool is_title(std::string_view lower);        // "mr", "mr.", "dr", ...
bool is_suffix(std::string_view lower);       // "jr", "jr.", "iii", ...
bool is_name_stopword(std::string_view lower);
bool is_reversal_cue(std::string_view lower);

std::optional<std::string> formal_name_for(std::string_view nickname);
std::optional<std::string> nickname_for(std::string_view formal);

struct GivenName {
  std::string_view name;
  bool feminine;
};
const std::vector<GivenName>& given_names();
const std::vector<std::string_view>& surnames();
const std::vector<std::string_view>& apostrophe_surnames();

// Splits a run-together lowercase word into number words, or nothing.
std::optional<std::vector<std::string>> segment_number_words(std::string_view lower);

}  // namespace lingvar::lexicon
