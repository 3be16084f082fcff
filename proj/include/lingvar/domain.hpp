#pragma once

#include <compare>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace lingvar {

class EntityKind {
 public:
  enum class Builtin { zip_code, date_of_birth, person_name, extension };

  static EntityKind zip_code() { return EntityKind(Builtin::zip_code, "zip_code"); }
  static EntityKind date_of_birth() { return EntityKind(Builtin::date_of_birth, "date_of_birth"); }
  static EntityKind person_name() { return EntityKind(Builtin::person_name, "person_name"); }
  static EntityKind extension(std::string tag);
  // Builtin tags map to their builtin kind, anything else is an extension tag.
  static EntityKind from_tag(std::string_view tag);

  Builtin builtin() const { return builtin_; }
  bool is_extension() const { return builtin_ == Builtin::extension; }
  const std::string& tag() const { return tag_; }

  friend bool operator==(const EntityKind& a, const EntityKind& b) { return a.tag_ == b.tag_; }
  friend auto operator<=>(const EntityKind& a, const EntityKind& b) { return a.tag_ <=> b.tag_; }

 private:
  EntityKind(Builtin b, std::string tag) : builtin_(b), tag_(std::move(tag)) {}
  Builtin builtin_;
  std::string tag_;
};

struct KindRules {
  std::function<std::string(std::string_view raw)> canonicalize;
  std::function<bool(std::string_view a, std::string_view b)> equivalent;
};

// Extension kinds must be registered before use; builtin kinds cannot be overridden.
void register_kind(const std::string& tag, KindRules rules);
bool is_registered(const EntityKind& kind);

struct FieldSpec {
  std::string field_name;
  EntityKind kind = EntityKind::zip_code();
  std::string output_type = "string";
  std::string question;
  std::string description;

  void validate() const;
};

// Builtin field specs using the wording from the generation prompts.
FieldSpec default_field_spec(const EntityKind& kind);

struct CalendarDate {
  int year = 0;
  int month = 0;
  int day = 0;
  friend bool operator==(const CalendarDate&, const CalendarDate&) = default;
};

bool is_valid_date(const CalendarDate& d);
std::string format_date(const CalendarDate& d);  // MM-DD-YYYY
int current_year();
int expand_two_digit_year(int yy, int reference_year);
// Decodes an unbroken spoken/keyed digit run (4, 5, 6, 7 or 8 digits).
std::optional<CalendarDate> decode_date_digits(std::string_view digits, int reference_year);

// Throws Error(format_error) when raw cannot be brought to canonical form,
// Error(unknown_kind) for an unregistered extension kind.
std::string canonicalize(const EntityKind& kind, std::string_view raw);
bool values_equivalent(const EntityKind& kind, std::string_view a, std::string_view b);

struct EntityValue {
  EntityKind kind = EntityKind::zip_code();
  std::string canonical;
  std::string raw;

  static EntityValue from_raw(const EntityKind& kind, std::string_view raw);
  friend bool operator==(const EntityValue& a, const EntityValue& b) {
    return a.kind == b.kind && a.canonical == b.canonical && a.raw == b.raw;
  }
};

enum class Provenance { synthetic, real };
enum class Split { train, valid, test };

std::string_view to_string(Provenance p);
std::string_view to_string(Split s);
Provenance provenance_from_string(std::string_view s);
Split split_from_string(std::string_view s);

struct Transcript {
  std::string text;
  std::set<std::string> variation_tags;
  EntityValue value;
  Provenance provenance = Provenance::synthetic;
};

struct LabeledSample {
  Transcript transcript;
  bool validated = false;
  std::optional<Split> split;
};

nlohmann::ordered_json to_json(const EntityValue& v);
EntityValue entity_value_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const LabeledSample& s);
LabeledSample sample_from_json(const nlohmann::json& j);

// One compact JSON object per line with a fixed field order.
std::string to_jsonl_line(const LabeledSample& s);
LabeledSample parse_sample_line(std::string_view line);
std::vector<LabeledSample> read_samples(std::istream& in);
std::vector<LabeledSample> read_samples_file(const std::string& path);
void write_samples(std::ostream& out, const std::vector<LabeledSample>& samples);
void write_samples_file(const std::string& path, const std::vector<LabeledSample>& samples);

}  // namespace lingvar
