#include <catch2/catch_amalgamated.hpp>

#include "lingvar/prompts.hpp"

using namespace lingvar;

TEST_CASE("prompt fields parse header lines", "[prompts]") {
  auto f = prompt_fields("Task ID: extract\nEntity Type: zip_code\nTask ID: ignored\nno colon here\n");
  CHECK(f.at("Task ID") == "extract");
  CHECK(f.at("Entity Type") == "zip_code");
  CHECK(f.count("no colon here") == 0);
}

TEST_CASE("requests carry their task and shape", "[prompts]") {
  FieldSpec spec = default_field_spec(EntityKind::zip_code());
  auto v = value_generation_request(spec, 7);
  CHECK(v.expected_shape == ExpectedShape::values_payload);
  CHECK(prompt_fields(v.user_text).at("Task ID") == "generate_values");
  CHECK(prompt_fields(v.user_text).at("Number of Values") == "7");

  auto value = EntityValue::from_raw(EntityKind::zip_code(), "12345");
  auto t = transcript_generation_request(spec, value, registry_for(EntityKind::zip_code()), {"already"}, 3);
  CHECK(t.expected_shape == ExpectedShape::transcripts_payload);
  CHECK(prompt_fields(t.user_text).at("Target Value") == "12345");

  auto j = validation_request(spec, "one two three four five", value);
  CHECK(j.expected_shape == ExpectedShape::boolean_verdict);
  CHECK(j.temperature == 0.0);
  CHECK(j.top_p == 1.0);

  auto e = extraction_request("Extract it.", spec, "one two");
  CHECK(e.system_text.find("Extract it.") != std::string::npos);
  CHECK(e.expected_shape == ExpectedShape::free_text);

  auto m = mutation_request("Extract it.", spec, {{"one two", "12345", ""}}, 2);
  CHECK(m.expected_shape == ExpectedShape::instructions_payload);
}

TEST_CASE("base instruction fills the field spec", "[prompts]") {
  FieldSpec spec = default_field_spec(EntityKind::zip_code());
  std::string b = base_extraction_instruction(spec);
  CHECK(b.find(spec.question) != std::string::npos);
  CHECK(b.find("Return only the extracted value") != std::string::npos);
  CHECK(b.find("5 numeric digits") != std::string::npos);
}
