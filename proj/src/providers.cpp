#include "lingvar/providers.hpp"

#include <algorithm>
#include <cctype>
#include <thread>

#include "lingvar/error.hpp"
#include "lingvar/text.hpp"

namespace lingvar {
namespace {

std::vector<std::string> string_array(const nlohmann::json& j, std::string_view what) {
  if (!j.is_array()) throw Error(ErrorCode::malformed_output, std::string(what) + " is not an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw Error(ErrorCode::malformed_output, std::string(what) + " holds a non-string");
    out.push_back(e.get<std::string>());
  }
  return out;
}

nlohmann::json parse_json(std::string_view body) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::malformed_output, std::string("invalid JSON: ") + e.what());
  }
}

const nlohmann::json& member(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::malformed_output, std::string("missing \"") + key + "\"");
  }
  return obj.at(key);
}

bool parse_verdict(std::string_view body) {
  std::string s = text::to_lower(text::trim(body));
  while (!s.empty() && std::ispunct(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s == "true") return true;
  if (s == "false") return false;
  throw Error(ErrorCode::malformed_output, "verdict is neither true nor false");
}

}  // namespace

std::string_view to_string(ExpectedShape s) {
  switch (s) {
    case ExpectedShape::values_payload: return "values_payload";
    case ExpectedShape::transcripts_payload: return "transcripts_payload";
    case ExpectedShape::boolean_verdict: return "boolean_verdict";
    case ExpectedShape::tag_array: return "tag_array";
    case ExpectedShape::instructions_payload: return "instructions_payload";
    case ExpectedShape::free_text: return "free_text";
  }
  return "free_text";
}

std::string strip_code_fences(std::string_view raw) {
  std::string_view s = text::trim(raw);
  if (!s.starts_with("```") || s.size() < 6 || !s.ends_with("```")) return std::string(s);
  std::string_view inner = s.substr(3, s.size() - 6);
  if (inner.find("```") != std::string_view::npos) return std::string(s);
  std::size_t i = 0;
  while (i < inner.size() && std::isalpha(static_cast<unsigned char>(inner[i]))) ++i;
  std::string_view tag = inner.substr(0, i);
  if (!tag.empty() && text::to_lower(tag) != "json") return std::string(s);
  return std::string(text::trim(inner.substr(i)));
}

ChatPayload parse_payload(std::string_view raw, ExpectedShape shape) {
  std::string body = strip_code_fences(raw);
  switch (shape) {
    case ExpectedShape::values_payload:
      return ValuesPayload{string_array(member(parse_json(body), "values"), "values")};
    case ExpectedShape::transcripts_payload: {
      const auto j = parse_json(body);
      const auto& arr = member(j, "transcripts");
      if (!arr.is_array()) throw Error(ErrorCode::malformed_output, "transcripts is not an array");
      TranscriptsPayload p;
      for (const auto& e : arr) {
        const auto& t = member(e, "transcript");
        if (!t.is_string()) throw Error(ErrorCode::malformed_output, "transcript is not a string");
        TranscriptDraft d{t.get<std::string>(), {}};
        if (e.contains("variation_types")) d.variation_types = string_array(e.at("variation_types"), "variation_types");
        p.transcripts.push_back(std::move(d));
      }
      return p;
    }
    case ExpectedShape::boolean_verdict:
      return BooleanVerdict{parse_verdict(body)};
    case ExpectedShape::tag_array: {
      const auto j = parse_json(body);
      if (j.is_object() && j.contains("variation_types")) return TagArray{string_array(j.at("variation_types"), "tags")};
      return TagArray{string_array(j, "tags")};
    }
    case ExpectedShape::instructions_payload:
      return InstructionsPayload{string_array(member(parse_json(body), "instructions"), "instructions")};
    case ExpectedShape::free_text:
      return FreeText{body};
  }
  throw Error(ErrorCode::malformed_output, "unknown shape");
}

ChatPayload chat(ChatBackend& backend, const ChatRequest& request, const RetryPolicy& retry, int* attempts) {
  const int budget = std::max(0, request.max_retries);
  auto backoff = retry.base_backoff;
  for (int attempt = 0;; ++attempt) {
    if (attempts) *attempts = attempt + 1;
    try {
      return parse_payload(backend.complete(request), request.expected_shape);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::provider_error && e.code() != ErrorCode::malformed_output) throw;
      if (attempt >= budget) throw;
    }
    if (backoff.count() > 0) std::this_thread::sleep_for(backoff);
    backoff = std::min(retry.max_backoff, backoff * 2);
  }
}

std::vector<EmbeddingVector> embed(EmbeddingBackend& backend, const std::vector<std::string>& texts) {
  if (texts.empty()) throw Error(ErrorCode::usage_error, "embed needs at least one text");
  auto out = backend.embed_batch(texts);
  if (out.size() != texts.size()) {
    throw Error(ErrorCode::provider_error, "expected " + std::to_string(texts.size()) + " embeddings, got " +
                                               std::to_string(out.size()));
  }
  for (const auto& v : out) {
    if (v.empty() || v.size() != out.front().size()) throw Error(ErrorCode::provider_error, "ragged embeddings");
  }
  return out;
}

ProviderMode provider_mode_from_string(std::string_view s) {
  if (s == "mock") return ProviderMode::mock;
  if (s == "live") return ProviderMode::live;
  throw Error(ErrorCode::invalid_config, "provider mode must be mock or live, got '" + std::string(s) + "'");
}

std::string_view to_string(ProviderMode m) { return m == ProviderMode::mock ? "mock" : "live"; }

ProviderProfile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_config, "provider profile must be an object");
  if (j.contains("api_key")) {
    throw Error(ErrorCode::invalid_config, "profiles name a credential_env variable; keys are not accepted inline");
  }
  ProviderProfile p;
  try {
    p.name = j.value("name", p.name);
    p.backend = j.value("backend", p.backend);
    p.endpoint = j.value("endpoint", p.endpoint);
    p.model = j.value("model", p.model);
    p.embedding_model = j.value("embedding_model", p.embedding_model);
    p.api_version = j.value("api_version", p.api_version);
    p.credential_env = j.value("credential_env", p.credential_env);
    p.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<long>(p.timeout.count())));
    p.requests_per_second = j.value("requests_per_second", p.requests_per_second);
    p.embedding_dimension = j.value("embedding_dimension", p.embedding_dimension);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, std::string("provider profile: ") + e.what());
  }
  if (p.backend != "openai" && p.backend != "azure_openai" && p.backend != "gemini") {
    throw Error(ErrorCode::invalid_config, "unknown backend '" + p.backend + "'");
  }
  if (p.embedding_dimension == 0) throw Error(ErrorCode::invalid_config, "embedding_dimension must be positive");
  return p;
}

nlohmann::ordered_json to_json(const ProviderProfile& p) {
  nlohmann::ordered_json j;
  j["name"] = p.name;
  j["backend"] = p.backend;
  j["endpoint"] = p.endpoint;
  j["model"] = p.model;
  j["embedding_model"] = p.embedding_model;
  j["api_version"] = p.api_version;
  j["credential_env"] = p.credential_env;
  j["timeout_ms"] = p.timeout.count();
  j["requests_per_second"] = p.requests_per_second;
  j["embedding_dimension"] = p.embedding_dimension;
  return j;
}

std::unique_ptr<ChatBackend> make_chat_backend(ProviderMode mode, const ProviderProfile& profile, std::uint64_t seed) {
  if (mode == ProviderMode::mock) return std::make_unique<MockChatBackend>(seed);
  return std::make_unique<HttpChatBackend>(profile);
}

std::unique_ptr<EmbeddingBackend> make_embedding_backend(ProviderMode mode, const ProviderProfile& profile) {
  if (mode == ProviderMode::mock) return std::make_unique<MockEmbeddingBackend>(profile.embedding_dimension);
  return std::make_unique<HttpEmbeddingBackend>(profile);
}

}  // namespace lingvar
