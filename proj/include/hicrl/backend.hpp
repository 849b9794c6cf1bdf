// Completion backends. The engine only sees the Backend interface; concrete
// implementations are the scripted replay store used by tests and offline
// runs, and the HTTP client in http_backend.hpp.
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hicrl/core.hpp"
#include "hicrl/util.hpp"

namespace hicrl {

// What the completion is for. Backends may use it to pick token limits;
// the scripted backend records it for test assertions.
enum class RoleHint { Goal, Think, Action, Finish, ReflectLow, ReflectHigh, ReflectFull };

inline std::string_view role_hint_text(RoleHint r) {
  switch (r) {
    case RoleHint::Goal: return "goal";
    case RoleHint::Think: return "think";
    case RoleHint::Action: return "action";
    case RoleHint::Finish: return "finish";
    case RoleHint::ReflectLow: return "reflect_low";
    case RoleHint::ReflectHigh: return "reflect_high";
    case RoleHint::ReflectFull: return "reflect_full";
  }
  return "goal";
}

struct CompletionRequest {
  std::string prompt;
  std::vector<std::string> stop_sequences = {"\n["};
  int max_tokens = 128;
  double temperature = 0.0;
  RoleHint role_hint = RoleHint::Goal;
};

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct CompletionResponse {
  std::string text;
  TokenUsage usage;
  std::string provider;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

// --- Scripted replay -------------------------------------------------------

// One fixture line: the seq-th completion for (scenario, episode).
struct FixtureLine {
  std::string scenario;
  int episode = 1;
  int seq = 0;
  std::string text;
};

inline json fixture_line_to_json(const FixtureLine& f) {
  return json{{"scenario", f.scenario}, {"episode", f.episode}, {"seq", f.seq}, {"text", f.text}};
}

inline FixtureLine fixture_line_from_json(const json& j) {
  FixtureLine f;
  f.scenario = j.at("scenario").get<std::string>();
  f.episode = j.at("episode").get<int>();
  f.seq = j.at("seq").get<int>();
  f.text = j.at("text").get<std::string>();
  return f;
}

// In-memory fixture table: completions keyed by (scenario, episode), ordered
// by seq. Lines may arrive in any order; seq values must be unique per key.
class ScriptedStore {
 public:
  ScriptedStore() = default;

  void add(FixtureLine line) {
    auto& slot = table_[{line.scenario, line.episode}];
    slot.emplace_back(line.seq, std::move(line.text));
  }

  void add(const std::string& scenario, int episode, std::vector<std::string> texts) {
    auto& slot = table_[{scenario, episode}];
    for (auto& t : texts) slot.emplace_back(static_cast<int>(slot.size()), std::move(t));
  }

  static ScriptedStore from_jsonl(std::istream& in) {
    ScriptedStore store;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim_view(line).empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        throw ConfigError("fixture line " + std::to_string(lineno) + " is not valid JSON");
      }
      store.add(fixture_line_from_json(j));
    }
    return store;
  }

  static ScriptedStore from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open fixture file: " + path);
    return from_jsonl(in);
  }

  // Completions for one (scenario, episode), sorted by seq.
  std::vector<std::string> session(const std::string& scenario, int episode) const {
    auto it = table_.find({scenario, episode});
    if (it == table_.end()) return {};
    auto entries = it->second;
    std::sort(entries.begin(), entries.end());
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (auto& [seq, text] : entries) out.push_back(std::move(text));
    return out;
  }

  bool has_session(const std::string& scenario, int episode) const {
    return table_.count({scenario, episode}) > 0;
  }

 private:
  std::map<std::pair<std::string, int>, std::vector<std::pair<int, std::string>>> table_;
};

// Replays fixture completions in call order. The harness selects the session
// with begin(); running past the end of a session throws FixtureExhausted so
// a short fixture fails loudly instead of silently truncating the episode.
class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(ScriptedStore store) : store_(std::move(store)) {}

  void begin(const std::string& scenario, int episode) {
    scenario_ = scenario;
    episode_ = episode;
    session_ = store_.session(scenario, episode);
    cursor_ = 0;
  }

  CompletionResponse complete(const CompletionRequest& request) override {
    if (cursor_ >= session_.size()) {
      throw FixtureExhausted("fixture exhausted for scenario '" + scenario_ + "' episode " +
                             std::to_string(episode_) + " at call " + std::to_string(cursor_));
    }
    CompletionResponse resp;
    resp.text = session_[cursor_++];
    // Crude but deterministic usage estimate so reports have stable numbers.
    resp.usage.prompt_tokens = static_cast<std::int64_t>(request.prompt.size() / 4);
    resp.usage.completion_tokens = static_cast<std::int64_t>(resp.text.size() / 4);
    resp.provider = "scripted";
    return resp;
  }

  std::size_t calls_made() const { return cursor_; }
  std::size_t calls_available() const { return session_.size(); }
  const ScriptedStore& store() const { return store_; }

 private:
  ScriptedStore store_;
  std::string scenario_;
  int episode_ = 1;
  std::vector<std::string> session_;
  std::size_t cursor_ = 0;
};

// Wraps any backend and keeps every request/response pair. Tests use it to
// audit prompts (for example, that finish prompts never include earlier
// completed segments).
class RecordingBackend : public Backend {
 public:
  struct Exchange {
    CompletionRequest request;
    CompletionResponse response;
  };

  explicit RecordingBackend(Backend& inner) : inner_(&inner) {}

  CompletionResponse complete(const CompletionRequest& request) override {
    CompletionResponse resp = inner_->complete(request);
    log_.push_back({request, resp});
    return resp;
  }

  const std::vector<Exchange>& log() const { return log_; }
  void clear() { log_.clear(); }

 private:
  Backend* inner_;
  std::vector<Exchange> log_;
};

}  // namespace hicrl
