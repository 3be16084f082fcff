#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace lingvar {

class VariationRegistry;

enum class ExpectedShape { values_payload, transcripts_payload, boolean_verdict, tag_array, instructions_payload, free_text };

std::string_view to_string(ExpectedShape s);

struct ChatRequest {
  std::string system_text;
  std::string user_text;
  ExpectedShape expected_shape = ExpectedShape::free_text;
  double temperature = 0.0;
  double top_p = 1.0;
  int max_retries = 3;
};

struct RetryPolicy {
  std::chrono::milliseconds base_backoff{500};
  std::chrono::milliseconds max_backoff{8000};
};

struct TranscriptDraft {
  std::string text;
  std::vector<std::string> variation_types;
};

struct ValuesPayload {
  std::vector<std::string> values;
};
struct TranscriptsPayload {
  std::vector<TranscriptDraft> transcripts;
};
struct BooleanVerdict {
  bool value = false;
};
struct TagArray {
  std::vector<std::string> tags;
};
struct InstructionsPayload {
  std::vector<std::string> instructions;
};
struct FreeText {
  std::string text;
};

using ChatPayload = std::variant<ValuesPayload, TranscriptsPayload, BooleanVerdict, TagArray, InstructionsPayload, FreeText>;

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  // Raw completion text. Throws Error(provider_error) on transport failure.
  virtual std::string complete(const ChatRequest& request) = 0;
  virtual std::string model_id() const = 0;
};

using EmbeddingVector = std::vector<double>;

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) = 0;
  virtual std::string model_id() const = 0;
};

std::string strip_code_fences(std::string_view raw);
// Strict parse of a completion into the requested shape; throws Error(malformed_output).
ChatPayload parse_payload(std::string_view raw, ExpectedShape shape);

// Completes and parses, retrying transport and parse failures up to
// request.max_retries times with exponential backoff.
ChatPayload chat(ChatBackend& backend, const ChatRequest& request, const RetryPolicy& retry = {},
                 int* attempts = nullptr);

template <typename T>
T chat_as(ChatBackend& backend, const ChatRequest& request, const RetryPolicy& retry = {}) {
  return std::get<T>(chat(backend, request, retry));
}

// Throws Error(usage_error) on an empty input, Error(provider_error) when
// the backend returns a different number of vectors or ragged dimensions.
std::vector<EmbeddingVector> embed(EmbeddingBackend& backend, const std::vector<std::string>& texts);

enum class ProviderMode { mock, live };
ProviderMode provider_mode_from_string(std::string_view s);
std::string_view to_string(ProviderMode m);

struct ProviderProfile {
  std::string name = "default";
  std::string backend = "openai";  // openai | azure_openai | gemini
  std::string endpoint;
  std::string model;
  std::string embedding_model;
  std::string api_version = "2024-02-01";
  std::string credential_env;  // environment variable holding the key; the key itself is never stored
  std::chrono::milliseconds timeout{60000};
  double requests_per_second = 0.0;
  std::size_t embedding_dimension = 256;  // mock embeddings only
};

ProviderProfile profile_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ProviderProfile& p);

// Pure function of (request, seed): answers every prompt built by prompts.hpp
// with rule-based output so the whole pipeline runs offline.
class MockChatBackend : public ChatBackend {
 public:
  explicit MockChatBackend(std::uint64_t seed = 0);
  MockChatBackend(std::uint64_t seed, const VariationRegistry& registry);
  std::string complete(const ChatRequest& request) override;
  std::string model_id() const override { return "mock-rule-v1"; }

 private:
  std::uint64_t seed_;
  const VariationRegistry* registry_;
};

// Hashed bag-of-tokens embedding; identical texts map to identical vectors.
class MockEmbeddingBackend : public EmbeddingBackend {
 public:
  explicit MockEmbeddingBackend(std::size_t dimension = 256) : dimension_(dimension) {}
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override;
  std::string model_id() const override { return "mock-hash-bow-" + std::to_string(dimension_); }

 private:
  std::size_t dimension_;
};

class RateLimiter {
 public:
  explicit RateLimiter(double per_second) : per_second_(per_second) {}
  void acquire();

 private:
  double per_second_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_{};
};

// OpenAI-compatible, Azure OpenAI and Gemini chat over HTTP(S).
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(ProviderProfile profile);
  std::string complete(const ChatRequest& request) override;
  std::string model_id() const override { return profile_.backend + ":" + profile_.model; }

 private:
  ProviderProfile profile_;
  RateLimiter limiter_;
};

class HttpEmbeddingBackend : public EmbeddingBackend {
 public:
  explicit HttpEmbeddingBackend(ProviderProfile profile);
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override;
  std::string model_id() const override { return profile_.backend + ":" + profile_.embedding_model; }

 private:
  ProviderProfile profile_;
  RateLimiter limiter_;
};

std::unique_ptr<ChatBackend> make_chat_backend(ProviderMode mode, const ProviderProfile& profile, std::uint64_t seed);
std::unique_ptr<EmbeddingBackend> make_embedding_backend(ProviderMode mode, const ProviderProfile& profile);

}  // namespace lingvar
