#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lingvar/domain.hpp"
#include "lingvar/evaluator.hpp"
#include "lingvar/generation.hpp"
#include "lingvar/optimizer.hpp"
#include "lingvar/providers.hpp"
#include "lingvar/validation.hpp"

namespace lingvar {

// TOML subset: tables, arrays of tables, dotted keys, strings, integers,
// floats, booleans, arrays and inline tables. Throws Error(invalid_config).
nlohmann::json parse_toml(std::string_view source);

// .toml files go through parse_toml, anything else is read as JSON.
nlohmann::json load_config_file(const std::string& path);

struct RunConfig {
  std::uint64_t seed = 0;
  ProviderMode provider_mode = ProviderMode::mock;
  std::string output_dir = "out";
  std::string profile = "default";
  std::map<std::string, ProviderProfile> profiles;
  FieldSpec field = default_field_spec(EntityKind::zip_code());
  std::size_t num_values = 5;
  std::size_t target_per_pair = 3;
  std::size_t max_rounds = 4;
  std::size_t parallelism = 1;
  std::vector<std::string> variations;
  ValidationMode validation = ValidationMode::oracle;
  SplitRatios ratios;
  OptimizerConfig optimizer;
  std::string variations_file;  // optional custom registry

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;  // credentials are never part of a profile
  const ProviderProfile& active_profile() const;
  GenerationConfig generation_config() const;
};

}  // namespace lingvar
