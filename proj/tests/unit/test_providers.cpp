#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "lingvar/prompts.hpp"
#include "lingvar/providers.hpp"

using namespace lingvar;
using lingvar::testing::ScriptedChat;

TEST_CASE("code fences are stripped only around a whole payload", "[providers]") {
  CHECK(strip_code_fences("```json\n{\"values\": []}\n```") == "{\"values\": []}");
  CHECK(strip_code_fences("```\n[1]\n```") == "[1]");
  CHECK(strip_code_fences("text ```json\n{}\n``` more") == "text ```json\n{}\n``` more");
}

TEST_CASE("payload shapes parse strictly", "[providers]") {
  auto v = std::get<ValuesPayload>(parse_payload(R"({"values": ["12345", "90210"]})", ExpectedShape::values_payload));
  CHECK(v.values.size() == 2);
  auto t = std::get<TranscriptsPayload>(parse_payload(
      R"({"transcripts": [{"transcript": "one", "variation_types": ["casual"]}]})", ExpectedShape::transcripts_payload));
  REQUIRE(t.transcripts.size() == 1);
  CHECK(t.transcripts[0].variation_types == std::vector<std::string>{"casual"});
  CHECK(std::get<BooleanVerdict>(parse_payload(" True.", ExpectedShape::boolean_verdict)).value);
  CHECK_FALSE(std::get<BooleanVerdict>(parse_payload("false", ExpectedShape::boolean_verdict)).value);
  CHECK(std::get<TagArray>(parse_payload(R"({"variation_types": ["a"]})", ExpectedShape::tag_array)).tags.size() == 1);
  CHECK(std::get<FreeText>(parse_payload("12345", ExpectedShape::free_text)).text == "12345");
  for (auto [raw, shape] : std::vector<std::pair<std::string, ExpectedShape>>{
           {"{}", ExpectedShape::values_payload},
           {"yes", ExpectedShape::boolean_verdict},
           {R"({"transcripts": [{"transcript": 1}]})", ExpectedShape::transcripts_payload},
           {R"({"instructions": 3})", ExpectedShape::instructions_payload}}) {
    try {
      parse_payload(raw, shape);
      FAIL("accepted " << raw);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::malformed_output);
    }
  }
}

TEST_CASE("chat retries transport and parse failures", "[providers]") {
  ScriptedChat chat({"!provider", "garbage", R"({"values": ["12345"]})"});
  ChatRequest req;
  req.expected_shape = ExpectedShape::values_payload;
  int attempts = 0;
  auto v = std::get<ValuesPayload>(lingvar::chat(chat, req, testing::no_wait(), &attempts));
  CHECK(v.values == std::vector<std::string>{"12345"});
  CHECK(attempts == 3);
}

TEST_CASE("chat gives up after max_retries", "[providers]") {
  ScriptedChat chat({"garbage"});
  ChatRequest req;
  req.expected_shape = ExpectedShape::boolean_verdict;
  req.max_retries = 2;
  int attempts = 0;
  try {
    lingvar::chat(chat, req, testing::no_wait(), &attempts);
    FAIL("expected malformed_output");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::malformed_output);
  }
  CHECK(attempts == 3);

  ScriptedChat down({"!provider"});
  req.max_retries = 0;
  try {
    lingvar::chat(down, req, testing::no_wait());
    FAIL("expected provider_error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::provider_error);
  }
}

TEST_CASE("mock chat is a pure function of request and seed", "[providers]") {
  FieldSpec spec = default_field_spec(EntityKind::date_of_birth());
  auto req = value_generation_request(spec, 5);
  MockChatBackend a(1), b(1), c(2);
  CHECK(a.complete(req) == b.complete(req));
  CHECK(a.complete(req) != c.complete(req));
  auto values = std::get<ValuesPayload>(lingvar::chat(a, req)).values;
  CHECK(values.size() == 5);
  for (const auto& v : values) CHECK_NOTHROW(canonicalize(spec.kind, v));
}

TEST_CASE("mock transcripts honour requested variations", "[providers]") {
  FieldSpec spec = default_field_spec(EntityKind::zip_code());
  auto value = EntityValue::from_raw(spec.kind, "90210");
  const auto* var = VariationRegistry::builtin().find("with_pause");
  auto req = transcript_generation_request(spec, value, {*var}, {}, 3);
  MockChatBackend mock(5);
  auto got = std::get<TranscriptsPayload>(lingvar::chat(mock, req)).transcripts;
  REQUIRE(got.size() == 3);
  for (const auto& t : got) CHECK(t.variation_types == std::vector<std::string>{"with_pause"});
}

TEST_CASE("mock embeddings are deterministic bags of words", "[providers]") {
  MockEmbeddingBackend e(64);
  auto v = embed(e, {"one two", "one two", "three"});
  REQUIRE(v.size() == 3);
  CHECK(v[0] == v[1]);
  CHECK(v[0].size() == 64);
  CHECK(v[0] != v[2]);
  CHECK_THROWS_AS(embed(e, {}), Error);
}

namespace {
class RaggedEmbedder : public EmbeddingBackend {
 public:
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override {
    std::vector<EmbeddingVector> out;
    for (std::size_t i = 0; i < texts.size(); ++i) out.push_back(EmbeddingVector(i + 1, 1.0));
    return out;
  }
  std::string model_id() const override { return "ragged"; }
};
}  // namespace

TEST_CASE("embedding shape problems are provider errors", "[providers]") {
  RaggedEmbedder r;
  try {
    embed(r, {"a", "b"});
    FAIL("expected provider_error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::provider_error);
  }
}

TEST_CASE("profiles never carry secrets", "[providers]") {
  auto p = profile_from_json({{"name", "main"}, {"backend", "azure_openai"}, {"endpoint", "https://x.example"},
                              {"model", "gpt"}, {"credential_env", "MY_KEY"}, {"timeout_ms", 1500}});
  CHECK(p.backend == "azure_openai");
  CHECK(p.timeout == std::chrono::milliseconds(1500));
  auto j = to_json(p);
  CHECK(j.at("credential_env") == "MY_KEY");
  CHECK_FALSE(j.contains("api_key"));
  CHECK_THROWS_AS(profile_from_json({{"api_key", "sk-123"}}), Error);
  CHECK_THROWS_AS(profile_from_json({{"backend", "carrier_pigeon"}}), Error);
  CHECK(provider_mode_from_string("mock") == ProviderMode::mock);
  CHECK_THROWS_AS(provider_mode_from_string("remote"), Error);
}

TEST_CASE("rate limiter spaces calls", "[providers]") {
  RateLimiter limiter(50.0);
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 4; ++i) limiter.acquire();
  CHECK(std::chrono::steady_clock::now() - start >= std::chrono::milliseconds(55));
}
