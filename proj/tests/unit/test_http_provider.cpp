#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "lingvar/error.hpp"
#include "lingvar/providers.hpp"

using namespace lingvar;

namespace {

constexpr const char* kKey = "sk-test-1234567890";

// Local stand-in for the three supported HTTP APIs.
class FakeService {
 public:
  FakeService() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_auth = req.get_header_value("Authorization");
      auto body = nlohmann::json::parse(req.body);
      last_model = body.value("model", "");
      std::string user = body["messages"].back()["content"];
      res.set_content(nlohmann::json{{"choices", {{{"message", {{"content", "echo:" + user}}}}}}}.dump(),
                      "application/json");
    });
    server_.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
      last_auth = req.get_header_value("Authorization");
      auto body = nlohmann::json::parse(req.body);
      nlohmann::json data = nlohmann::json::array();
      // Out of order on purpose.
      for (int i = static_cast<int>(body["input"].size()) - 1; i >= 0; --i) {
        data.push_back({{"index", i}, {"embedding", {double(i), 1.0}}});
      }
      res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
    });
    server_.Post(R"(/openai/deployments/([^/]+)/chat/completions)",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   last_auth = req.get_header_value("api-key");
                   last_model = req.matches[1];
                   last_query = req.get_param_value("api-version");
                   res.set_content(R"({"choices": [{"message": {"content": "azure"}}]})", "application/json");
                 });
    server_.Post(R"(/v1beta/models/([^:]+):generateContent)", [this](const httplib::Request& req, httplib::Response& res) {
      last_auth = req.get_header_value("x-goog-api-key");
      last_model = req.matches[1];
      res.set_content(R"({"candidates": [{"content": {"parts": [{"text": "gemini"}]}}]})", "application/json");
    });
    server_.Post("/fail/v1/chat/completions", [](const httplib::Request& req, httplib::Response& res) {
      res.status = 401;
      res.set_content("invalid key " + req.get_header_value("Authorization"), "text/plain");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeService() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& base = "") const { return "http://127.0.0.1:" + std::to_string(port_) + base; }

  std::string last_auth, last_model, last_query;

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

ProviderProfile profile(const std::string& backend, const std::string& endpoint) {
  ProviderProfile p;
  p.name = "test";
  p.backend = backend;
  p.endpoint = endpoint;
  p.model = "m1";
  p.embedding_model = "e1";
  p.credential_env = "LINGVAR_TEST_KEY";
  p.timeout = std::chrono::milliseconds(2000);
  return p;
}

ChatRequest hello() {
  ChatRequest r;
  r.system_text = "sys";
  r.user_text = "hello";
  return r;
}

}  // namespace

TEST_CASE("openai compatible chat and embeddings", "[http]") {
  ::setenv("LINGVAR_TEST_KEY", kKey, 1);
  FakeService svc;
  HttpChatBackend chat(profile("openai", svc.url()));
  CHECK(chat.complete(hello()) == "echo:hello");
  CHECK(svc.last_auth == std::string("Bearer ") + kKey);
  CHECK(svc.last_model == "m1");
  CHECK(chat.model_id() == "openai:m1");

  HttpEmbeddingBackend emb(profile("openai", svc.url() + "/"));
  auto v = embed(emb, {"a", "b", "c"});
  REQUIRE(v.size() == 3);
  CHECK(v[0][0] == 0.0);
  CHECK(v[2][0] == 2.0);
}

TEST_CASE("azure and gemini routes", "[http]") {
  ::setenv("LINGVAR_TEST_KEY", kKey, 1);
  FakeService svc;
  HttpChatBackend azure(profile("azure_openai", svc.url()));
  CHECK(azure.complete(hello()) == "azure");
  CHECK(svc.last_auth == kKey);
  CHECK(svc.last_model == "m1");
  CHECK(svc.last_query == "2024-02-01");
  HttpChatBackend gemini(profile("gemini", svc.url()));
  CHECK(gemini.complete(hello()) == "gemini");
  CHECK(svc.last_auth == kKey);
}

TEST_CASE("http failures never echo the credential", "[http]") {
  ::setenv("LINGVAR_TEST_KEY", kKey, 1);
  FakeService svc;
  HttpChatBackend chat(profile("openai", svc.url("/fail")));
  try {
    chat.complete(hello());
    FAIL("expected provider_error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::provider_error);
    CHECK(std::string(e.what()).find("401") != std::string::npos);
    CHECK(std::string(e.what()).find(kKey) == std::string::npos);
  }
}

TEST_CASE("missing credential and unreachable endpoint", "[http]") {
  ::unsetenv("LINGVAR_TEST_KEY");
  HttpChatBackend chat(profile("openai", "http://127.0.0.1:9"));
  try {
    chat.complete(hello());
    FAIL("expected provider_error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::provider_error);
    CHECK(std::string(e.what()).find("LINGVAR_TEST_KEY") != std::string::npos);
  }
  auto p = profile("openai", "http://127.0.0.1:9");
  p.credential_env.clear();
  p.timeout = std::chrono::milliseconds(300);
  HttpChatBackend closed(p);
  CHECK_THROWS_AS(closed.complete(hello()), Error);
}
