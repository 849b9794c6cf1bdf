// OpenAI-compatible HTTP backend. Kept out of backend.hpp so that targets
// which never talk to a live endpoint do not pay for compiling httplib.
#pragma once

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

#include "httplib.h"

#include "hicrl/backend.hpp"
#include "hicrl/util.hpp"

namespace hicrl {

inline constexpr std::string_view kApiKeyEnvVar = "HICRL_API_KEY";
inline constexpr std::string_view kBaseUrlEnvVar = "HICRL_BASE_URL";

struct HttpBackendConfig {
  std::string base_url;            // falls back to $HICRL_BASE_URL
  std::string api_key;             // falls back to $HICRL_API_KEY
  std::string model = "gpt-4o-mini";
  std::string path = "/v1/chat/completions";
  int max_retries = 3;             // on 429 / 5xx / timeouts
  int initial_backoff_ms = 500;    // doubles per retry
  int requests_per_minute = 60;    // global limiter across all instances
  int timeout_seconds = 60;
  bool sleep_between_retries = true;  // tests disable to run fast
};

namespace detail {

// Process-wide request pacing shared by every HttpBackend.
inline std::mutex& rate_mutex() {
  static std::mutex m;
  return m;
}

inline std::chrono::steady_clock::time_point& next_allowed() {
  static std::chrono::steady_clock::time_point t = std::chrono::steady_clock::now();
  return t;
}

inline void rate_limit_wait(int requests_per_minute) {
  if (requests_per_minute <= 0) return;
  auto interval = std::chrono::milliseconds(60'000 / requests_per_minute);
  std::chrono::steady_clock::time_point wake;
  {
    std::lock_guard<std::mutex> lock(rate_mutex());
    auto now = std::chrono::steady_clock::now();
    wake = std::max(now, next_allowed());
    next_allowed() = wake + interval;
  }
  std::this_thread::sleep_until(wake);
}

inline std::string env_or_empty(std::string_view name) {
  const char* v = std::getenv(std::string(name).c_str());
  return v ? std::string(v) : std::string();
}

}  // namespace detail

class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.api_key.empty()) config_.api_key = detail::env_or_empty(kApiKeyEnvVar);
    if (config_.base_url.empty()) config_.base_url = detail::env_or_empty(kBaseUrlEnvVar);
    if (config_.api_key.empty()) {
      throw AuthError("no API key: set " + std::string(kApiKeyEnvVar) + " or pass one in config");
    }
    if (config_.base_url.empty()) {
      throw ConfigError("no base URL: set " + std::string(kBaseUrlEnvVar) + " or pass one in config");
    }
  }

  CompletionResponse complete(const CompletionRequest& request) override {
    if (trim_view(request.prompt).empty()) {
      throw std::invalid_argument("refusing to send an empty prompt");
    }
    json body = {
        {"model", config_.model},
        {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})},
        {"max_tokens", request.max_tokens},
        {"temperature", request.temperature},
    };
    if (!request.stop_sequences.empty()) body["stop"] = request.stop_sequences;
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0 && config_.sleep_between_retries) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(config_.initial_backoff_ms << (attempt - 1)));
      }
      detail::rate_limit_wait(config_.requests_per_minute);

      httplib::Client client(config_.base_url);
      client.set_connection_timeout(config_.timeout_seconds, 0);
      client.set_read_timeout(config_.timeout_seconds, 0);
      httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};
      auto result = client.Post(config_.path, headers, payload, "application/json");

      if (!result) {
        last_error = "transport failure: " + httplib::to_string(result.error());
        continue;  // timeouts and connection errors are retryable
      }
      int status = result->status;
      if (status == 401 || status == 403) {
        throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(status) + ")");
      }
      if (status == 429 || status >= 500) {
        last_error = "HTTP " + std::to_string(status);
        continue;
      }
      if (status == 400 && result->body.find("context_length") != std::string::npos) {
        throw BudgetError("endpoint rejected prompt for context length");
      }
      if (status != 200) {
        throw TransportError("HTTP " + std::to_string(status) + ": " + result->body);
      }
      return parse_response(result->body);
    }
    throw TransportError("gave up after " + std::to_string(config_.max_retries + 1) +
                         " attempts: " + last_error);
  }

  const HttpBackendConfig& config() const { return config_; }

 private:
  CompletionResponse parse_response(const std::string& body) const {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw TransportError("endpoint returned invalid JSON");
    CompletionResponse resp;
    try {
      resp.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw TransportError(std::string("unexpected response shape: ") + e.what());
    }
    if (j.contains("usage")) {
      resp.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0);
      resp.usage.completion_tokens = j["usage"].value("completion_tokens", 0);
    }
    resp.provider = j.value("model", config_.model);
    return resp;
  }

  HttpBackendConfig config_;
};

}  // namespace hicrl
