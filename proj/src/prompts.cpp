#include "lingvar/prompts.hpp"

#include <sstream>

#include "lingvar/text.hpp"

namespace lingvar {
namespace {

std::string quoted(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string field(std::string_view key, std::string_view value) {
  std::string line(key);
  line += ": ";
  line += value;
  line += "\n";
  return line;
}

}  // namespace

ChatRequest value_generation_request(const FieldSpec& spec, std::size_t num_values) {
  ChatRequest r;
  r.expected_shape = ExpectedShape::values_payload;
  r.system_text = "You generate realistic sample values for fields collected over the phone.";
  std::string u;
  u += field("Task ID", "generate_values");
  u += field("Field Name", spec.field_name);
  u += field("Field Description", spec.description);
  u += field("Question", spec.question);
  u += field("Expected Output Type", spec.output_type);
  u += field("Entity Type", spec.kind.tag());
  u += field("Number of Values", std::to_string(num_values));
  u += "\nGenerate distinct, plausible values for the field above.\n";
  u += "Output Format (JSON):\n{ \"values\": [ \"value_1\", \"value_2\", \"...\", \"value_N\" ] }\n";
  r.user_text = std::move(u);
  return r;
}

ChatRequest transcript_generation_request(const FieldSpec& spec, const EntityValue& value,
                                          const std::vector<VariationType>& variations,
                                          const std::vector<std::string>& existing, std::size_t count) {
  ChatRequest r;
  r.expected_shape = ExpectedShape::transcripts_payload;
  r.system_text = "You write natural spoken phone-call answers that verbalize a given value.";
  std::vector<std::string> ids, instructions;
  for (const auto& v : variations) {
    ids.push_back(v.id);
    instructions.push_back(v.id + ": " + v.instruction + (v.example.empty() ? "" : " Example: " + v.example));
  }
  std::string u;
  u += field("Task ID", "generate_transcripts");
  u += field("Question", spec.question);
  u += field("Output Type", spec.output_type);
  u += field("Entity Type", spec.kind.tag());
  u += field("Target Value", value.canonical);
  u += field("Existing Transcripts", nlohmann::json(existing).dump());
  u += field("Variation Types", text::join(ids, ", "));
  u += field("Variation Instructions", text::join(instructions, " | "));
  u += field("Number of Transcripts", std::to_string(count));
  u += "\nTask: Generate additional natural spoken transcripts that verbalize the target value without "
       "altering its meaning.\n";
  u += "Key Constraints:\n";
  u += "- Always express the target value (" + value.canonical + ") in natural spoken form\n";
  u += "- For dates: include both spoken and digit-only formats (e.g., \"January fifth, 1989\" and \"1589\")\n";
  u += "- For names: add a realistic last name to the first name\n";
  u += "Variation Type Assignment:\n";
  u += "- Assign one or more variation types per transcript from the listed variation types\n";
  u += "- Ensure even distribution across all variation types\n";
  u += "- Use \"not_listed\" if the transcript doesn't match any type\n";
  u += "Diversity Rule: Be creative in how the value is spoken, but do not change what the value is.\n";
  u += "Output Format (JSON):\n";
  u += "{ \"transcripts\": [ { \"transcript\": \"spoken response\", \"variation_types\": [\"type1\", \"type2\"] } ] }\n";
  u += "Output Constraints:\n";
  u += "- Return only valid JSON, no markdown, no extra text\n";
  u += "- Each transcript must clearly verbalize the value\n";
  u += "- All responses must match the specified output type\n";
  r.user_text = std::move(u);
  return r;
}

ChatRequest validation_request(const FieldSpec& spec, std::string_view transcript, const EntityValue& truth) {
  ChatRequest r;
  r.expected_shape = ExpectedShape::boolean_verdict;
  r.system_text = "You verify whether a value can be extracted from a phone-call transcript.";
  std::string u;
  u += field("Task ID", "validate");
  u += field("Transcript", quoted(transcript));
  u += field("Ground Truth", truth.canonical);
  u += field("Action Name", spec.field_name);
  u += field("Entity Type", spec.kind.tag());
  u += "\nTask: Determine if the ground truth value can be extracted from the transcript.\n";
  u += "Rules:\n";
  u += "- If the transcript contains the value (even with corrections) -> true\n";
  u += "- If the transcript is vague or doesn't contain the value -> false\n";
  u += "- If the value is mentioned at any point -> true\n";
  u += "Examples:\n";
  u += "- \"My zip is one two three four five\", 12345 -> true\n";
  u += "- \"I don't know\", 12345 -> false\n";
  u += "- \"seven oh ... no, nine oh two one oh\", 90210 -> true\n";
  u += "Date Format Considerations:\n";
  u += "- Accept continuous digit formats: e.g., 01-15-2024 -> 01152024, 11524, etc.\n";
  u += "- Spoken digit sequences: e.g., \"zero one one five two zero two four\" are valid\n";
  u += "Output: true or false\n";
  r.user_text = std::move(u);
  return r;
}

ChatRequest classification_request(const EntityKind& kind, const std::vector<VariationType>& variations,
                                   std::string_view transcript) {
  ChatRequest r;
  r.expected_shape = ExpectedShape::tag_array;
  r.system_text = "You label phone-call transcripts with linguistic variation types.";
  std::vector<std::string> ids, lines;
  for (const auto& v : variations) {
    ids.push_back(v.id);
    lines.push_back("- " + v.id + ": " + v.instruction + (v.example.empty() ? "" : " Example: " + v.example));
  }
  std::string u;
  u += field("Task ID", "classify");
  u += field("Entity Type", kind.tag());
  u += field("Transcript", quoted(transcript));
  u += field("Variation Types", text::join(ids, ", "));
  u += "\nVariation definitions:\n" + text::join(lines, "\n") + "\n";
  u += "Return a JSON array of every variation type id that applies to the transcript. Use [\"not_listed\"] "
       "if none apply. Return only the JSON array.\n";
  r.user_text = std::move(u);
  return r;
}

ChatRequest extraction_request(std::string_view instruction, const FieldSpec& spec, std::string_view transcript) {
  ChatRequest r;
  r.expected_shape = ExpectedShape::free_text;
  r.system_text = std::string(instruction);
  std::string u;
  u += field("Task ID", "extract");
  u += field("Question", spec.question);
  u += field("Field Type", spec.output_type);
  u += field("Field Description", spec.description);
  u += field("Entity Type", spec.kind.tag());
  u += field("Transcript", quoted(transcript));
  u += "\nReturn only the extracted value, or an empty answer if the value is absent.\n";
  r.user_text = std::move(u);
  return r;
}

ChatRequest mutation_request(std::string_view instruction, const FieldSpec& spec,
                             const std::vector<FailureCase>& failures, std::size_t count) {
  ChatRequest r;
  r.expected_shape = ExpectedShape::instructions_payload;
  r.system_text = "You improve extraction instructions by studying the cases they get wrong.";
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& f : failures) {
    cases.push_back({{"transcript", f.transcript}, {"gold", f.gold}, {"predicted", f.predicted}});
  }
  std::string u;
  u += field("Task ID", "mutate_instruction");
  u += field("Entity Type", spec.kind.tag());
  u += field("Current Instruction", quoted(instruction));
  u += field("Failures", cases.dump());
  u += field("Number of Candidates", std::to_string(count));
  u += "\nPropose revised instructions that keep what works and fix the failures above.\n";
  u += "Output Format (JSON): { \"instructions\": [ \"revised instruction\", \"...\" ] }\n";
  r.user_text = std::move(u);
  return r;
}

std::string base_extraction_instruction(const FieldSpec& spec) {
  std::ostringstream o;
  o << "General Extraction Instructions:\n";
  o << "- Extract the value from the transcript using the given question, field type, and field description.\n";
  o << "- Question: " << spec.question << "\n";
  o << "- Field Type: " << spec.output_type << "\n";
  o << "- Field Description: " << spec.description << "\n";
  o << "Output Format:\n";
  o << "- Return only the extracted value\n";
  o << "- Do not include any symbols, labels, or extra text\n";
  o << "Example:\n";
  o << "Input: transcript: \"...\", Output: predicted: \"...\"\n";
  switch (spec.kind.builtin()) {
    case EntityKind::Builtin::zip_code:
      o << "ZIP Code Specific Guidelines:\n";
      o << "- Extract exactly 5 numeric digits\n";
      o << "- Do not interpret ZIP codes as dates\n";
      o << "- Return the raw 5-digit number only\n";
      o << "- Example: \"one two three four five\" -> \"12345\"\n";
      break;
    case EntityKind::Builtin::date_of_birth:
      o << "Date of Birth Specific Guidelines:\n";
      o << "- Return the date as MM-DD-YYYY\n";
      o << "- Example: \"January second, nineteen ninety\" -> \"01-02-1990\"\n";
      break;
    case EntityKind::Builtin::person_name:
      o << "Name Specific Guidelines:\n";
      o << "- Return the first name only\n";
      o << "- Example: \"John Smith\" -> \"John\"\n";
      break;
    case EntityKind::Builtin::extension:
      break;
  }
  return o.str();
}

std::map<std::string, std::string> prompt_fields(std::string_view body) {
  std::map<std::string, std::string> out;
  for (const auto& line : text::split(body, '\n')) {
    auto pos = line.find(": ");
    if (pos == std::string::npos || pos == 0) continue;
    std::string key(text::trim(std::string_view(line).substr(0, pos)));
    if (key.empty() || key.front() == '-' || out.count(key)) continue;
    out[key] = std::string(text::trim(std::string_view(line).substr(pos + 2)));
  }
  return out;
}

}  // namespace lingvar
