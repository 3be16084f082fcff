#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "lingvar/error.hpp"
#include "lingvar/providers.hpp"
#include "lingvar/text.hpp"

namespace lingvar {
namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string base;    // path prefix without trailing slash
};

Url split_url(const std::string& endpoint) {
  auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::invalid_config, "endpoint needs a scheme: " + endpoint);
  auto slash = endpoint.find('/', scheme + 3);
  Url u;
  u.origin = endpoint.substr(0, slash);
  u.base = slash == std::string::npos ? "" : endpoint.substr(slash);
  while (!u.base.empty() && u.base.back() == '/') u.base.pop_back();
  return u;
}

std::string credential(const ProviderProfile& p) {
  if (p.credential_env.empty()) return "";
  const char* v = std::getenv(p.credential_env.c_str());
  if (!v || !*v) {
    throw Error(ErrorCode::provider_error, "credential variable " + p.credential_env + " is not set");
  }
  return v;
}

httplib::Headers auth_headers(const ProviderProfile& p, const std::string& key) {
  httplib::Headers h;
  if (key.empty()) return h;
  if (p.backend == "azure_openai") {
    h.emplace("api-key", key);
  } else if (p.backend == "gemini") {
    h.emplace("x-goog-api-key", key);
  } else {
    h.emplace("Authorization", "Bearer " + key);
  }
  return h;
}

nlohmann::json post(const ProviderProfile& p, const std::string& path, const nlohmann::json& body) {
  if (p.endpoint.empty()) throw Error(ErrorCode::invalid_config, "profile " + p.name + " has no endpoint");
  Url u = split_url(p.endpoint);
  httplib::Client client(u.origin);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(p.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(p.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  const std::string key = credential(p);
  auto res = client.Post(u.base + path, auth_headers(p, key), body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::provider_error, p.name + ": transport failure (" + httplib::to_string(res.error()) + ")");
  }
  if (res->status != 200) {
    std::string snippet = res->body.substr(0, 200);
    // Some services echo the presented key in error bodies.
    if (!key.empty()) snippet = text::replace_all(res->body, key, "[redacted]").substr(0, 200);
    throw Error(ErrorCode::provider_error, p.name + ": HTTP " + std::to_string(res->status) + " " + snippet);
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::provider_error, p.name + ": response is not JSON");
  }
}

std::string deployment_path(const ProviderProfile& p, const std::string& deployment, const std::string& op) {
  return "/openai/deployments/" + deployment + "/" + op + "?api-version=" + p.api_version;
}

}  // namespace

void RateLimiter::acquire() {
  if (per_second_ <= 0.0) return;
  const auto gap = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / per_second_));
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + gap;
  }
  std::this_thread::sleep_until(slot);
}

HttpChatBackend::HttpChatBackend(ProviderProfile profile)
    : profile_(std::move(profile)), limiter_(profile_.requests_per_second) {}

std::string HttpChatBackend::complete(const ChatRequest& request) {
  limiter_.acquire();
  const auto& p = profile_;
  try {
    if (p.backend == "gemini") {
      nlohmann::json body = {
          {"contents", {{{"role", "user"}, {"parts", {{{"text", request.user_text}}}}}}},
          {"generationConfig", {{"temperature", request.temperature}, {"topP", request.top_p}}}};
      if (!request.system_text.empty()) body["systemInstruction"] = {{"parts", {{{"text", request.system_text}}}}};
      auto j = post(p, "/v1beta/models/" + p.model + ":generateContent", body);
      return j.at("candidates").at(0).at("content").at("parts").at(0).at("text").get<std::string>();
    }
    nlohmann::json messages = nlohmann::json::array();
    if (!request.system_text.empty()) messages.push_back({{"role", "system"}, {"content", request.system_text}});
    messages.push_back({{"role", "user"}, {"content", request.user_text}});
    nlohmann::json body = {{"messages", messages}, {"temperature", request.temperature}, {"top_p", request.top_p}};
    std::string path;
    if (p.backend == "azure_openai") {
      path = deployment_path(p, p.model, "chat/completions");
    } else {
      body["model"] = p.model;
      path = "/v1/chat/completions";
    }
    auto j = post(p, path, body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::provider_error, p.name + ": unexpected response layout");
  }
}

HttpEmbeddingBackend::HttpEmbeddingBackend(ProviderProfile profile)
    : profile_(std::move(profile)), limiter_(profile_.requests_per_second) {}

std::vector<EmbeddingVector> HttpEmbeddingBackend::embed_batch(const std::vector<std::string>& texts) {
  limiter_.acquire();
  const auto& p = profile_;
  std::vector<EmbeddingVector> out;
  try {
    if (p.backend == "gemini") {
      nlohmann::json requests = nlohmann::json::array();
      for (const auto& t : texts) {
        requests.push_back({{"model", "models/" + p.embedding_model}, {"content", {{"parts", {{{"text", t}}}}}}});
      }
      auto j = post(p, "/v1beta/models/" + p.embedding_model + ":batchEmbedContents", {{"requests", requests}});
      for (const auto& e : j.at("embeddings")) out.push_back(e.at("values").get<EmbeddingVector>());
      return out;
    }
    nlohmann::json body = {{"input", texts}};
    std::string path;
    if (p.backend == "azure_openai") {
      path = deployment_path(p, p.embedding_model, "embeddings");
    } else {
      body["model"] = p.embedding_model;
      path = "/v1/embeddings";
    }
    auto j = post(p, path, body);
    std::vector<std::pair<std::size_t, EmbeddingVector>> indexed;
    for (const auto& d : j.at("data")) {
      indexed.emplace_back(d.value("index", indexed.size()), d.at("embedding").get<EmbeddingVector>());
    }
    std::sort(indexed.begin(), indexed.end(), [](auto& a, auto& b) { return a.first < b.first; });
    for (auto& [i, v] : indexed) out.push_back(std::move(v));
    return out;
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::provider_error, p.name + ": unexpected embedding response layout");
  }
}

}  // namespace lingvar
