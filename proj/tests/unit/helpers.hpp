#pragma once

#include <deque>
#include <mutex>
#include <string>
#include <vector>

#include "lingvar/error.hpp"
#include "lingvar/providers.hpp"

namespace lingvar::testing {

// Replays canned replies in order; a reply of "!provider" raises provider_error.
class ScriptedChat : public ChatBackend {
 public:
  explicit ScriptedChat(std::vector<std::string> replies) : replies_(replies.begin(), replies.end()) {}
  std::string complete(const ChatRequest& request) override {
    std::lock_guard lock(mu_);
    requests.push_back(request);
    if (replies_.empty()) throw Error(ErrorCode::provider_error, "script exhausted");
    std::string r = replies_.front();
    if (replies_.size() > 1) replies_.pop_front();
    if (r == "!provider") throw Error(ErrorCode::provider_error, "scripted failure");
    return r;
  }
  std::string model_id() const override { return "scripted"; }
  std::vector<ChatRequest> requests;

 private:
  std::mutex mu_;
  std::deque<std::string> replies_;
};

inline RetryPolicy no_wait() { return {std::chrono::milliseconds(0), std::chrono::milliseconds(0)}; }

}  // namespace lingvar::testing
