#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lingvar/domain.hpp"
#include "lingvar/providers.hpp"
#include "lingvar/taxonomy.hpp"

namespace lingvar {

struct FailureCase {
  std::string transcript;
  std::string gold;
  std::string predicted;  // empty when nothing was extracted
};

ChatRequest value_generation_request(const FieldSpec& spec, std::size_t num_values);
ChatRequest transcript_generation_request(const FieldSpec& spec, const EntityValue& value,
                                          const std::vector<VariationType>& variations,
                                          const std::vector<std::string>& existing, std::size_t count);
ChatRequest validation_request(const FieldSpec& spec, std::string_view transcript, const EntityValue& truth);
ChatRequest classification_request(const EntityKind& kind, const std::vector<VariationType>& variations,
                                   std::string_view transcript);
ChatRequest extraction_request(std::string_view instruction, const FieldSpec& spec, std::string_view transcript);
ChatRequest mutation_request(std::string_view instruction, const FieldSpec& spec,
                             const std::vector<FailureCase>& failures, std::size_t count);

// Zero-shot extraction instruction used as the optimizer's starting point.
std::string base_extraction_instruction(const FieldSpec& spec);

// "Key: value" header lines of a prompt body (first occurrence wins).
std::map<std::string, std::string> prompt_fields(std::string_view body);

}  // namespace lingvar
