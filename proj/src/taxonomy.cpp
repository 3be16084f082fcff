#include "lingvar/taxonomy.hpp"

#include <fstream>
#include <set>

#include "lingvar/error.hpp"
#include "lingvar/text.hpp"

namespace lingvar {
namespace {

const char* const kArrow = " \xE2\x86\x92 ";

std::vector<VariationType> builtin_entries() {
  using C = VariationCategory;
  std::vector<VariationType> v = {
      {"filler_words", C::general, "Include filler words like \"um\", \"uh\", \"you know\".",
       "um, it's one two three four five", ""},
      {"hesitation", C::general, "Include hesitations and pauses.", "it's... one... two... three...", ""},
      {"correction", C::general, "Include self-corrections.", "one two three... no wait, four five", ""},
      {"repetition", C::general, "Repeat parts for emphasis.", "one two three, one two three, four five", ""},
      {"pause", C::general, "Insert natural pauses.", "one two, pause, three four five", ""},
      {"formal", C::general, "Use formal, precise language.", "the number is one two three four five", ""},
      {"casual", C::general, "Use relaxed language.", "it's one two three four five", ""},
      {"polite", C::general, "Use polite language.", "please, it's one two three four five", ""},
      {"confident", C::general, "Sound confident.", "definitely one two three four five", ""},
      {"uncertain", C::general, "Sound unsure.", "I think it's one two three four five", ""},
      {"rushed", C::general, "Speak quickly.", "onetwothreefourfive", ""},
      {"careful", C::general, "Speak slowly and carefully.", "carefully, one two three four five", ""},
      {"confirmation", C::general, "Ask for confirmation.", "one two three four five, is that right?", ""},
      {"clarification", C::general, "Clarify the answer.", "one two three four five, does that make sense?", ""},
      {"direct_and_simple", C::general, "Be direct and simple.", "one two three four five", ""},
      {"brief_confirmation", C::general, "Use brief confirmation.", "yes, one two three four five", ""},
      {"concise_confirmation", C::general, "Use concise confirmation.", "confirmed, one two three four five", ""},

      {"digit_by_digit", C::zip_specific, "Say each digit separately.", "one two three four five", ""},
      {"grouped_two", C::zip_specific, "Group digits in twos.", "twelve thirty-four five", ""},
      {"grouped_three", C::zip_specific, "Group digits in threes.", "one twenty-three forty-five", ""},
      {"hundred", C::zip_specific, "Use \"hundred\".", "three hundred two five", ""},
      {"mixed_grouping", C::zip_specific, "Use mixed digit groupings.", "twelve three four five", ""},
      {"spoken_number_split", C::zip_specific, "Split number words into digits.", "thirty two five eight", ""},
      {"reversed", C::zip_specific, "Say digits in reverse.", "five four three two one", ""},
      {"with_pause", C::zip_specific, "Add pauses.", "one two... three four... five", ""},
      {"with_repetition", C::zip_specific, "Repeat groups.", "one two, one two, three four five", ""},
      {"with_correction", C::zip_specific, "Self-correct.", "one two three... no wait, four five", ""},
      {"with_hesitation", C::zip_specific, "Add hesitation.", "one... two... three... four... five", ""},
      {"with_filler", C::zip_specific, "Use filler words.", "um, one two three, you know, four five", ""},
      {"zip_formal", C::zip_specific, "Formal phrasing.", "the digits are one two three four five", ""},
      {"zip_casual", C::zip_specific, "Casual phrasing.", "yeah, it's one two three four five", ""},
      {"zip_polite", C::zip_specific, "Polite phrasing.", "please, it's one two three four five", ""},
      {"zip_confident", C::zip_specific, "Confident tone.", "definitely one two three four five", ""},
      {"zip_uncertain", C::zip_specific, "Uncertain tone.", "I think it's one two three four five", ""},
      {"spelled_out", C::zip_specific, "Spell digits with hyphens.", "one-two-three-four-five", ""},

      {"date_as_4_digits", C::dob_specific, "4-digit format.", "1267 \xE2\x86\x92 01-02-1967", ""},
      {"spoken_date_4_digits", C::dob_specific, "Spoken version of 4-digit.",
       "one two six seven \xE2\x86\x92 01-02-1967", ""},
      {"date_as_5_digits", C::dob_specific, "5-digit format.", "32584 \xE2\x86\x92 03-25-1984", ""},
      {"spoken_date_5_digits", C::dob_specific, "Spoken version of 5-digit.",
       "five one seven eight two \xE2\x86\x92 05-17-1982", ""},
      {"date_as_6_digits", C::dob_specific, "6-digit format MMDDYY.", "120285 \xE2\x86\x92 12-02-1985", ""},
      {"spoken_date_6_digits", C::dob_specific, "Spoken 6-digit format.",
       "one two zero two eight five \xE2\x86\x92 12-02-1985", ""},
      {"date_as_8_digits", C::dob_specific, "Full 8-digit date.", "12021947 \xE2\x86\x92 12-02-1947", ""},
      {"spoken_date_8_digits", C::dob_specific, "Spoken 8-digit format.",
       "one two zero two one nine four seven \xE2\x86\x92 12-02-1947", ""},
      {"spoken_month_day_year", C::dob_specific, "Natural spoken format.", "January second, nineteen ninety", ""},
      {"mixed_spoken_and_digits", C::dob_specific, "Mixed formats.", "January zero two, nineteen ninety", ""},
      {"filler_or_correction", C::dob_specific, "Includes filler or correction.",
       "uh, zero one zero two one nine nine zero", ""},
      {"casual_or_polite_digits", C::dob_specific, "Casual/polite phrasing.", "please, one five, eighty five", ""},

      {"name_with_last", C::name_specific, "Full name.", "John Smith \xE2\x86\x92 John", ""},
      {"name_with_prefix", C::name_specific, "Prefix + name.", "My name is John Smith \xE2\x86\x92 John", ""},
      {"name_reverse_order", C::name_specific, "Last name first.", "Smith, John \xE2\x86\x92 John", ""},
      {"name_with_title", C::name_specific, "Name with title.", "Mr. John Smith \xE2\x86\x92 John", ""},
      {"name_with_middle", C::name_specific, "Name with middle.", "John Michael Smith \xE2\x86\x92 John", ""},
      {"name_with_suffix", C::name_specific, "Name with suffix.", "John Smith Jr. \xE2\x86\x92 John", ""},
      {"name_with_initials", C::name_specific, "Initials format.", "J. M. Smith \xE2\x86\x92 John", ""},
      {"name_with_correction", C::name_specific, "Correction.",
       "James\xE2\x80\x94no, I mean John Smith \xE2\x86\x92 John", ""},
      {"name_partial_spelling", C::name_specific, "Partial spelling.",
       "John, that\xE2\x80\x99s J-O-H-N Smith \xE2\x86\x92 John", ""},
      {"name_with_apostrophe", C::name_specific, "Apostrophe in last name.", "O'Connor, John \xE2\x86\x92 John", ""},
      {"name_hyphenated", C::name_specific, "Hyphenated last name.", "John Smith-Jones \xE2\x86\x92 John", ""},
      {"nickname", C::name_specific, "Nickname.", "Johnny \xE2\x86\x92 John", ""},

      {std::string(kNotListed), C::general, "The transcript doesn't match any listed type.", "", ""},
  };
  return v;
}

bool category_matches(const VariationType& t, const EntityKind& kind) {
  switch (t.category) {
    case VariationCategory::general: return true;
    case VariationCategory::zip_specific: return kind.builtin() == EntityKind::Builtin::zip_code;
    case VariationCategory::dob_specific: return kind.builtin() == EntityKind::Builtin::date_of_birth;
    case VariationCategory::name_specific: return kind.builtin() == EntityKind::Builtin::person_name;
    case VariationCategory::extension_specific: return t.extension_kind == kind.tag();
  }
  return false;
}

}  // namespace

std::string_view to_string(VariationCategory c) {
  switch (c) {
    case VariationCategory::general: return "general";
    case VariationCategory::zip_specific: return "zip_specific";
    case VariationCategory::dob_specific: return "dob_specific";
    case VariationCategory::name_specific: return "name_specific";
    case VariationCategory::extension_specific: return "extension_specific";
  }
  return "general";
}

VariationCategory category_from_string(std::string_view s) {
  if (s == "general") return VariationCategory::general;
  if (s == "zip_specific") return VariationCategory::zip_specific;
  if (s == "dob_specific") return VariationCategory::dob_specific;
  if (s == "name_specific") return VariationCategory::name_specific;
  if (s == "extension_specific") return VariationCategory::extension_specific;
  throw Error(ErrorCode::invalid_config, "unknown variation category '" + std::string(s) + "'");
}

std::string VariationType::example_utterance() const {
  auto pos = example.find(kArrow);
  return pos == std::string::npos ? example : example.substr(0, pos);
}

std::optional<std::string> VariationType::example_value() const {
  auto pos = example.find(kArrow);
  if (pos == std::string::npos) return std::nullopt;
  return example.substr(pos + std::string_view(kArrow).size());
}

VariationRegistry::VariationRegistry(std::vector<VariationType> entries) : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (e.id.empty()) throw Error(ErrorCode::invalid_config, "variation id must be non-empty");
    if (!seen.insert(e.id).second) throw Error(ErrorCode::invalid_config, "duplicate variation id " + e.id);
    if (e.category == VariationCategory::extension_specific && e.extension_kind.empty()) {
      throw Error(ErrorCode::invalid_config, "extension variation " + e.id + " needs a kind");
    }
  }
}

const VariationRegistry& VariationRegistry::builtin() {
  static const VariationRegistry r(builtin_entries());
  return r;
}

VariationRegistry VariationRegistry::from_json(const nlohmann::json& j, bool extend_builtin) {
  std::vector<VariationType> entries;
  if (extend_builtin) entries = builtin_entries();
  if (!j.is_object() || !j.contains("variations") || !j["variations"].is_array()) {
    throw Error(ErrorCode::invalid_config, "registry file needs a 'variations' array");
  }
  for (const auto& item : j["variations"]) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string()) {
      throw Error(ErrorCode::invalid_config, "each variation needs a string id");
    }
    VariationType t;
    t.id = item["id"].get<std::string>();
    t.category = category_from_string(item.value("category", std::string("general")));
    t.instruction = item.value("instruction", std::string());
    t.example = item.value("example", std::string());
    t.extension_kind = item.value("kind", std::string());
    if (!t.extension_kind.empty() && t.category == VariationCategory::general) {
      t.category = VariationCategory::extension_specific;
    }
    entries.push_back(std::move(t));
  }
  return VariationRegistry(std::move(entries));
}

VariationRegistry VariationRegistry::load_file(const std::string& path, bool extend_builtin) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open registry " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::invalid_config, "registry " + path + " is not valid JSON");
  return from_json(j, extend_builtin);
}

const VariationType* VariationRegistry::find(std::string_view id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::vector<VariationType> VariationRegistry::for_kind(const EntityKind& kind) const {
  if (kind.is_extension() && !is_registered(kind)) throw Error(ErrorCode::unknown_kind, kind.tag());
  std::vector<VariationType> out;
  for (const auto& e : entries_) {
    if (e.id == kNotListed) continue;
    if (category_matches(e, kind)) out.push_back(e);
  }
  return out;
}

std::vector<std::string> VariationRegistry::ids_for(const EntityKind& kind) const {
  std::vector<std::string> out;
  for (const auto& e : for_kind(kind)) out.push_back(e.id);
  return out;
}

std::vector<VariationType> registry_for(const EntityKind& kind) { return VariationRegistry::builtin().for_kind(kind); }

}  // namespace lingvar
