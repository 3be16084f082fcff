#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lingvar/domain.hpp"

namespace lingvar {

inline constexpr std::size_t kMaxVariationsPerRender = 3;

struct RenderRequest {
  EntityValue value;
  std::vector<std::string> variation_ids;  // at most kMaxVariationsPerRender
  std::uint64_t seed = 0;
};

// Deterministic: same request, same text. Seed 0 selects each variation's
// first template. Throws UnsupportedCombination for mutually exclusive ids.
std::string render(const RenderRequest& request);

enum class Grouping { single, pairs, triples, mixed };

// Spoken English for a digit string; the result parses back to the same digits.
std::string number_to_spoken(std::string_view digits, Grouping grouping);

// Spoken year such as "nineteen eighty-five" or "two thousand five".
std::string spoken_year(int year);

// False when the value cannot carry the variation's own surface form and the
// renderer falls back to a neighbouring form (e.g. a 4-digit date for 12-25-1990).
bool render_is_faithful(const EntityValue& value, std::string_view variation_id);

// Throws UnsupportedCombination if any pair of ids is mutually exclusive for the kind.
void check_combination(const EntityKind& kind, const std::vector<std::string>& ids);
bool combination_supported(const EntityKind& kind, const std::vector<std::string>& ids);

}  // namespace lingvar
