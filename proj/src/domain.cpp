#include "lingvar/domain.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>

#include "lingvar/error.hpp"
#include "lingvar/spoken_parser.hpp"
#include "lingvar/text.hpp"

namespace lingvar {
namespace {

struct KindTable {
  std::mutex mu;
  std::map<std::string, KindRules, std::less<>> rules;
};

KindTable& kind_table() {
  static KindTable t;
  return t;
}

std::optional<KindRules> rules_for(const std::string& tag) {
  auto& t = kind_table();
  std::lock_guard lock(t.mu);
  auto it = t.rules.find(tag);
  if (it == t.rules.end()) return std::nullopt;
  return it->second;
}

int to_int(std::string_view digits) {
  int v = 0;
  for (char c : digits) v = v * 10 + (c - '0');
  return v;
}

std::string canonical_zip(std::string_view raw) {
  std::string_view s = text::trim(raw);
  std::string digits;
  if (s.size() == 5 && text::is_digits(s)) return std::string(s);
  if (s.size() == 9 && text::is_digits(s)) return std::string(s.substr(0, 5));
  if (s.size() == 10 && (s[5] == '-' || s[5] == ' ') && text::is_digits(s.substr(0, 5)) &&
      text::is_digits(s.substr(6))) {
    return std::string(s.substr(0, 5));
  }
  throw Error(ErrorCode::format_error, "not a ZIP code: '" + std::string(s) + "'");
}

std::string canonical_dob(std::string_view raw) {
  std::string_view s = text::trim(raw);
  if (text::is_digits(s)) {
    if (auto d = decode_date_digits(s, current_year())) return format_date(*d);
    throw Error(ErrorCode::format_error, "undecodable date digits: '" + std::string(s) + "'");
  }
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == '-' || c == '/' || c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  bool ok = parts.size() == 3;
  for (const auto& p : parts) ok = ok && text::is_digits(p) && p.size() <= 4;
  if (ok) {
    CalendarDate d;
    if (parts[0].size() == 4) {
      d = {to_int(parts[0]), to_int(parts[1]), to_int(parts[2])};
    } else if (parts[2].size() == 4 || parts[2].size() == 2) {
      int year = to_int(parts[2]);
      if (parts[2].size() == 2) year = expand_two_digit_year(year, current_year());
      d = {year, to_int(parts[0]), to_int(parts[1])};
    } else {
      ok = false;
    }
    if (ok && parts[0].size() <= 4 && is_valid_date(d)) return format_date(d);
  }
  throw Error(ErrorCode::format_error, "not a date of birth: '" + std::string(s) + "'");
}

std::string canonical_name(std::string_view raw) {
  ParseOptions opts;
  opts.map_nicknames = false;
  if (auto n = find_given_name(raw, opts)) return *n;
  throw Error(ErrorCode::format_error, "no given name in '" + std::string(text::trim(raw)) + "'");
}

}  // namespace

EntityKind EntityKind::extension(std::string tag) { return EntityKind(Builtin::extension, std::move(tag)); }

EntityKind EntityKind::from_tag(std::string_view tag) {
  if (tag == "zip_code") return zip_code();
  if (tag == "date_of_birth") return date_of_birth();
  if (tag == "person_name") return person_name();
  return extension(std::string(tag));
}

void register_kind(const std::string& tag, KindRules rules) {
  if (!EntityKind::from_tag(tag).is_extension()) {
    throw Error(ErrorCode::usage_error, "cannot override builtin kind " + tag);
  }
  if (!rules.canonicalize || !rules.equivalent) {
    throw Error(ErrorCode::usage_error, "extension kind " + tag + " needs canonicalize and equivalent");
  }
  auto& t = kind_table();
  std::lock_guard lock(t.mu);
  t.rules[tag] = std::move(rules);
}

bool is_registered(const EntityKind& kind) {
  if (!kind.is_extension()) return true;
  return rules_for(kind.tag()).has_value();
}

void FieldSpec::validate() const {
  if (text::trim(field_name).empty()) throw Error(ErrorCode::invalid_config, "field_name must be non-empty");
  if (text::trim(output_type).empty()) throw Error(ErrorCode::invalid_config, "output_type must be non-empty");
  if (text::trim(question).empty()) throw Error(ErrorCode::invalid_config, "question must be non-empty");
  if (text::trim(description).empty()) throw Error(ErrorCode::invalid_config, "description must be non-empty");
  if (!is_registered(kind)) throw Error(ErrorCode::unknown_kind, kind.tag());
}

FieldSpec default_field_spec(const EntityKind& kind) {
  switch (kind.builtin()) {
    case EntityKind::Builtin::zip_code:
      return {"zip_code", kind, "string", "What is your zip code?",
              "Zip code is a 5 digit number, with optional 4 digit add on code"};
    case EntityKind::Builtin::date_of_birth:
      return {"date_of_birth", kind, "string", "What is your date of birth?",
              "Date of birth of the caller, formatted as MM-DD-YYYY"};
    case EntityKind::Builtin::person_name:
      return {"first_name", kind, "string", "Could you tell me your name please?",
              "First name of the caller, without title, middle name or last name"};
    case EntityKind::Builtin::extension:
      break;
  }
  throw Error(ErrorCode::unknown_kind, "no default field spec for " + kind.tag());
}

bool is_valid_date(const CalendarDate& d) {
  if (d.year < 1 || d.year > 9999 || d.month < 1 || d.month > 12 || d.day < 1) return false;
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int limit = days[d.month - 1];
  bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
  if (d.month == 2 && leap) limit = 29;
  return d.day <= limit;
}

std::string format_date(const CalendarDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d-%02d-%04d", d.month, d.day, d.year);
  return buf;
}

int current_year() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  return tm.tm_year + 1900;
}

int expand_two_digit_year(int yy, int reference_year) {
  int pivot = reference_year % 100;
  int century = reference_year - pivot;
  return yy <= pivot ? century + yy : century - 100 + yy;
}

std::optional<CalendarDate> decode_date_digits(std::string_view digits, int reference_year) {
  if (!text::is_digits(digits)) return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len) { return to_int(digits.substr(pos, len)); };
  auto valid = [](CalendarDate d) -> std::optional<CalendarDate> {
    if (is_valid_date(d)) return d;
    return std::nullopt;
  };
  switch (digits.size()) {
    case 8:
      return valid({num(4, 4), num(0, 2), num(2, 2)});
    case 7: {
      int dd = num(1, 2);
      if (digits[1] != '0' && dd >= 10) {
        if (auto d = valid({num(3, 4), num(0, 1), dd})) return d;
      }
      return valid({num(3, 4), num(0, 2), num(2, 1)});
    }
    case 6:
      return valid({expand_two_digit_year(num(4, 2), reference_year), num(0, 2), num(2, 2)});
    case 5: {
      int yy = expand_two_digit_year(num(3, 2), reference_year);
      int dd = num(1, 2);
      if (digits[1] != '0' && dd >= 10) {
        if (auto d = valid({yy, num(0, 1), dd})) return d;
      }
      int mm = num(0, 2);
      if (digits[0] != '0' && mm >= 10) return valid({yy, mm, num(2, 1)});
      return std::nullopt;
    }
    case 4:
      return valid({expand_two_digit_year(num(2, 2), reference_year), num(0, 1), num(1, 1)});
    default:
      return std::nullopt;
  }
}

std::string canonicalize(const EntityKind& kind, std::string_view raw) {
  switch (kind.builtin()) {
    case EntityKind::Builtin::zip_code: return canonical_zip(raw);
    case EntityKind::Builtin::date_of_birth: return canonical_dob(raw);
    case EntityKind::Builtin::person_name: return canonical_name(raw);
    case EntityKind::Builtin::extension: break;
  }
  auto rules = rules_for(kind.tag());
  if (!rules) throw Error(ErrorCode::unknown_kind, kind.tag());
  return rules->canonicalize(raw);
}

bool values_equivalent(const EntityKind& kind, std::string_view a, std::string_view b) {
  if (kind.is_extension()) {
    auto rules = rules_for(kind.tag());
    if (!rules) throw Error(ErrorCode::unknown_kind, kind.tag());
    return rules->equivalent(a, b);
  }
  std::string ca, cb;
  try {
    ca = canonicalize(kind, a);
    cb = canonicalize(kind, b);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::format_error) return false;
    throw;
  }
  if (kind.builtin() == EntityKind::Builtin::person_name) return text::to_lower(ca) == text::to_lower(cb);
  return ca == cb;
}

EntityValue EntityValue::from_raw(const EntityKind& kind, std::string_view raw) {
  return EntityValue{kind, canonicalize(kind, raw), std::string(raw)};
}

std::string_view to_string(Provenance p) { return p == Provenance::real ? "real" : "synthetic"; }

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "train";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "real") return Provenance::real;
  if (s == "synthetic") return Provenance::synthetic;
  throw Error(ErrorCode::format_error, "unknown provenance '" + std::string(s) + "'");
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "valid") return Split::valid;
  if (s == "test") return Split::test;
  throw Error(ErrorCode::format_error, "unknown split '" + std::string(s) + "'");
}

nlohmann::ordered_json to_json(const EntityValue& v) {
  nlohmann::ordered_json j;
  j["kind"] = v.kind.tag();
  j["canonical"] = v.canonical;
  j["raw"] = v.raw;
  return j;
}

EntityValue entity_value_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("canonical") || !j["kind"].is_string() ||
      !j["canonical"].is_string()) {
    throw Error(ErrorCode::format_error, "value must carry string kind and canonical");
  }
  EntityValue v;
  v.kind = EntityKind::from_tag(j["kind"].get<std::string>());
  v.canonical = j["canonical"].get<std::string>();
  v.raw = j.contains("raw") && j["raw"].is_string() ? j["raw"].get<std::string>() : v.canonical;
  return v;
}

nlohmann::ordered_json to_json(const LabeledSample& s) {
  nlohmann::ordered_json j;
  j["text"] = s.transcript.text;
  j["value"] = to_json(s.transcript.value);
  j["variation_tags"] = nlohmann::ordered_json::array();
  for (const auto& t : s.transcript.variation_tags) j["variation_tags"].push_back(t);
  j["validated"] = s.validated;
  j["split"] = s.split ? nlohmann::ordered_json(std::string(to_string(*s.split))) : nlohmann::ordered_json(nullptr);
  j["provenance"] = std::string(to_string(s.transcript.provenance));
  return j;
}

LabeledSample sample_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::format_error, "sample must be a JSON object");
  if (!j.contains("text") || !j["text"].is_string()) throw Error(ErrorCode::format_error, "sample.text missing");
  if (!j.contains("value")) throw Error(ErrorCode::format_error, "sample.value missing");
  LabeledSample s;
  s.transcript.text = j["text"].get<std::string>();
  s.transcript.value = entity_value_from_json(j["value"]);
  if (j.contains("variation_tags")) {
    if (!j["variation_tags"].is_array()) throw Error(ErrorCode::format_error, "variation_tags must be an array");
    for (const auto& t : j["variation_tags"]) {
      if (!t.is_string()) throw Error(ErrorCode::format_error, "variation tag must be a string");
      s.transcript.variation_tags.insert(t.get<std::string>());
    }
  }
  if (j.contains("validated")) {
    if (!j["validated"].is_boolean()) throw Error(ErrorCode::format_error, "validated must be boolean");
    s.validated = j["validated"].get<bool>();
  }
  if (j.contains("split") && !j["split"].is_null()) {
    if (!j["split"].is_string()) throw Error(ErrorCode::format_error, "split must be a string or null");
    s.split = split_from_string(j["split"].get<std::string>());
  }
  if (j.contains("provenance")) {
    if (!j["provenance"].is_string()) throw Error(ErrorCode::format_error, "provenance must be a string");
    s.transcript.provenance = provenance_from_string(j["provenance"].get<std::string>());
  }
  return s;
}

std::string to_jsonl_line(const LabeledSample& s) { return to_json(s).dump(); }

LabeledSample parse_sample_line(std::string_view line) {
  nlohmann::json j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::format_error, "invalid JSON line");
  return sample_from_json(j);
}

std::vector<LabeledSample> read_samples(std::istream& in) {
  std::vector<LabeledSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(parse_sample_line(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::format_error, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LabeledSample> read_samples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  return read_samples(in);
}

void write_samples(std::ostream& out, const std::vector<LabeledSample>& samples) {
  for (const auto& s : samples) out << to_jsonl_line(s) << '\n';
}

void write_samples_file(const std::string& path, const std::vector<LabeledSample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  write_samples(out, samples);
}

}  // namespace lingvar
