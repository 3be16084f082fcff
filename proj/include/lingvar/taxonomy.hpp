#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lingvar/domain.hpp"

namespace lingvar {

class ChatBackend;
struct RetryPolicy;

enum class VariationCategory { general, zip_specific, dob_specific, name_specific, extension_specific };

std::string_view to_string(VariationCategory c);
VariationCategory category_from_string(std::string_view s);

inline constexpr std::string_view kNotListed = "not_listed";

struct VariationType {
  std::string id;
  VariationCategory category = VariationCategory::general;
  std::string instruction;
  std::string example;         // as tabulated, possibly "utterance → value"
  std::string extension_kind;  // only for extension_specific entries

  std::string example_utterance() const;
  std::optional<std::string> example_value() const;
};

class VariationRegistry {
 public:
  // The four tabulated categories plus the not_listed sentinel.
  static const VariationRegistry& builtin();
  // Builds a registry from {"variations": [...]}; entries extend the builtin
  // set unless extend_builtin is false. Ids must be unique.
  static VariationRegistry from_json(const nlohmann::json& j, bool extend_builtin = true);
  static VariationRegistry load_file(const std::string& path, bool extend_builtin = true);

  const std::vector<VariationType>& entries() const { return entries_; }
  const VariationType* find(std::string_view id) const;
  // General entries plus the kind's own entries; never includes not_listed.
  std::vector<VariationType> for_kind(const EntityKind& kind) const;
  std::vector<std::string> ids_for(const EntityKind& kind) const;

 private:
  explicit VariationRegistry(std::vector<VariationType> entries);
  std::vector<VariationType> entries_;
};

std::vector<VariationType> registry_for(const EntityKind& kind);

enum class ClassifyMode { rule, provider };

// Rule mode returns every id whose surface signature matches; {not_listed}
// when none do. Provider mode asks the chat backend for a tag array and maps
// unknown ids to not_listed.
std::set<std::string> classify_rule(std::string_view text, const EntityKind& kind,
                                    const VariationRegistry& registry = VariationRegistry::builtin());
std::set<std::string> classify_with_provider(std::string_view text, const EntityKind& kind, ChatBackend& backend,
                                             const RetryPolicy& retry,
                                             const VariationRegistry& registry = VariationRegistry::builtin());
std::set<std::string> classify(std::string_view text, const EntityKind& kind, ClassifyMode mode,
                               ChatBackend* backend = nullptr,
                               const VariationRegistry& registry = VariationRegistry::builtin());

}  // namespace lingvar
