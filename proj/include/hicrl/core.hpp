// Domain types shared by every module: tag-structured steps and trajectories,
// goals, episodes, reflections and the long-term reflection memory.
#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hicrl/util.hpp"
#include "json.hpp"

namespace hicrl {

using json = nlohmann::json;

enum class Tag { Goal, Think, Action, Finish };

inline std::string_view tag_text(Tag tag) {
  switch (tag) {
    case Tag::Goal: return "[Goal]";
    case Tag::Think: return "[Think]";
    case Tag::Action: return "[Action]";
    case Tag::Finish: return "[Finish]";
  }
  return "[Goal]";
}

inline std::optional<Tag> tag_from_text(std::string_view text) {
  if (text == "[Goal]") return Tag::Goal;
  if (text == "[Think]") return Tag::Think;
  if (text == "[Action]") return Tag::Action;
  if (text == "[Finish]") return Tag::Finish;
  return std::nullopt;
}

// One record of the episode interaction. `observation` is present exactly
// when tag == Action; `raw` carries the unparsed LLM text for Finish steps.
struct Step {
  int index = 0;
  Tag tag = Tag::Goal;
  std::string content;
  std::optional<std::string> observation;
  std::optional<std::string> raw;
};

inline Step make_step(int index, Tag tag, std::string content,
                      std::optional<std::string> observation = std::nullopt,
                      std::optional<std::string> raw = std::nullopt) {
  if (trim_view(content).empty()) {
    throw std::invalid_argument("step content must be non-empty");
  }
  if ((tag == Tag::Action) != observation.has_value()) {
    throw std::invalid_argument("observation must be present exactly for Action steps");
  }
  return Step{index, tag, std::move(content), std::move(observation), std::move(raw)};
}

enum class GoalStatus { Active, Finished, OpenAtTermination };

inline std::string_view goal_status_text(GoalStatus s) {
  switch (s) {
    case GoalStatus::Active: return "active";
    case GoalStatus::Finished: return "finished";
    case GoalStatus::OpenAtTermination: return "open-at-termination";
  }
  return "active";
}

inline std::optional<GoalStatus> goal_status_from_text(std::string_view s) {
  if (s == "active") return GoalStatus::Active;
  if (s == "finished") return GoalStatus::Finished;
  if (s == "open-at-termination") return GoalStatus::OpenAtTermination;
  return std::nullopt;
}

// A natural-language sub-task proposed by the high-level policy.
struct Goal {
  int id = 0;          // ordinal within the episode
  std::string text;
  GoalStatus status = GoalStatus::Active;
  int proposed_at = 0; // step index of the [Goal] step
};

struct Trajectory {
  std::vector<Step> steps;
  std::vector<Goal> goals;
};

// Checks the construction invariants that hold in every mode: contiguous
// indices, observation placement, non-empty content, at most one active goal.
inline void validate_trajectory(const Trajectory& t) {
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    if (s.index != static_cast<int>(i)) {
      throw std::invalid_argument("step indices must be contiguous from 0");
    }
    if (trim_view(s.content).empty()) {
      throw std::invalid_argument("step content must be non-empty");
    }
    if ((s.tag == Tag::Action) != s.observation.has_value()) {
      throw std::invalid_argument("observation present iff tag = Action");
    }
  }
  int active = 0;
  for (const Goal& g : t.goals) {
    if (g.status == GoalStatus::Active) ++active;
  }
  if (active > 1) throw std::invalid_argument("at most one goal may be active");
}

// True when the step sequence matches (Goal Think (Action Finish)*)+ possibly
// cut short by termination, with the Finish verdict driving the branch:
// Finish=Yes expects a new Goal, Finish=No expects another Action.
inline bool matches_tag_grammar(const Trajectory& t) {
  enum class Expect { Goal, Think, Action, Finish };
  Expect expect = Expect::Goal;
  for (const Step& s : t.steps) {
    switch (expect) {
      case Expect::Goal:
        if (s.tag != Tag::Goal) return false;
        expect = Expect::Think;
        break;
      case Expect::Think:
        if (s.tag != Tag::Think) return false;
        expect = Expect::Action;
        break;
      case Expect::Action:
        if (s.tag != Tag::Action) return false;
        expect = Expect::Finish;
        break;
      case Expect::Finish:
        if (s.tag != Tag::Finish) return false;
        expect = (s.content == "Yes") ? Expect::Goal : Expect::Action;
        break;
    }
  }
  return true;
}

enum class Outcome { Success, Failure, Truncated };

inline std::string_view outcome_text(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Failure: return "failure";
    case Outcome::Truncated: return "truncated";
  }
  return "failure";
}

inline std::optional<Outcome> outcome_from_text(std::string_view s) {
  if (s == "success") return Outcome::Success;
  if (s == "failure") return Outcome::Failure;
  if (s == "truncated") return Outcome::Truncated;
  return std::nullopt;
}

struct Episode {
  std::string scenario_id;
  Trajectory trajectory;
  Outcome outcome = Outcome::Failure;
  double reward = 0.0;              // terminal task score in [0, 1]
  int episode_index = 1;            // 1-based
  std::optional<std::string> abort_reason;
};

enum class ReflectionLevel { Low, High, Full };

inline std::string_view reflection_level_text(ReflectionLevel l) {
  switch (l) {
    case ReflectionLevel::Low: return "low";
    case ReflectionLevel::High: return "high";
    case ReflectionLevel::Full: return "full";
  }
  return "low";
}

inline std::optional<ReflectionLevel> reflection_level_from_text(std::string_view s) {
  if (s == "low") return ReflectionLevel::Low;
  if (s == "high") return ReflectionLevel::High;
  if (s == "full") return ReflectionLevel::Full;
  return std::nullopt;
}

inline constexpr std::size_t kDefaultReflectionBodyCap = 320;

// Cuts `body` at the last sentence boundary that fits within `cap`; falls
// back to a hard cut when no boundary fits.
inline std::string truncate_to_sentence(std::string_view body, std::size_t cap) {
  std::string text = trim(body);
  if (text.size() <= cap) return text;
  std::size_t cut = std::string::npos;
  for (std::size_t i = 0; i < cap; ++i) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') cut = i + 1;
  }
  if (cut == std::string::npos) cut = cap;
  return trim(text.substr(0, cut));
}

// A verbal lesson distilled from a failed episode. `goal_text` is present
// exactly for low-level reflections.
struct Reflection {
  ReflectionLevel level = ReflectionLevel::Low;
  std::optional<std::string> goal_text;
  std::string body;
  int source_episode = 1;
  std::string source_scenario;
};

inline Reflection make_reflection(ReflectionLevel level, std::optional<std::string> goal_text,
                                  std::string_view body, int source_episode,
                                  std::string source_scenario,
                                  std::size_t body_cap = kDefaultReflectionBodyCap) {
  if (goal_text.has_value() != (level == ReflectionLevel::Low)) {
    throw std::invalid_argument("goal_text present iff level = low");
  }
  Reflection r;
  r.level = level;
  r.goal_text = std::move(goal_text);
  r.body = truncate_to_sentence(body, body_cap);
  r.source_episode = source_episode;
  r.source_scenario = std::move(source_scenario);
  return r;
}

inline constexpr std::size_t kDefaultMemoryBudget = 12;

// Long-term verbal memory. `reflections` is budget-capped with whole-episode
// eviction; `raw_attempts` holds retry-mode rendered trajectories and grows
// without bound by design (retry mode dies on BudgetError, not eviction).
struct LongTermMemory {
  std::vector<Reflection> reflections;
  std::size_t budget = kDefaultMemoryBudget;
  std::vector<std::string> raw_attempts;
};

// Appends `fresh` and evicts oldest source_episode groups, whole episodes at
// a time, until the budget holds. Pure: returns a new memory value.
inline LongTermMemory record_reflections(const LongTermMemory& memory,
                                         const std::vector<Reflection>& fresh) {
  LongTermMemory out = memory;
  out.reflections.insert(out.reflections.end(), fresh.begin(), fresh.end());
  while (out.reflections.size() > out.budget) {
    int oldest = out.reflections.front().source_episode;
    for (const Reflection& r : out.reflections) {
      oldest = std::min(oldest, r.source_episode);
    }
    std::erase_if(out.reflections,
                  [oldest](const Reflection& r) { return r.source_episode == oldest; });
  }
  return out;
}

// A full-trajectory demonstration used as few-shot context.
struct FewShotExample {
  std::string env_id;
  std::string task_type;
  std::string body;
};

// --- JSON Lines serialization -------------------------------------------
//
// Episodes persist as one object per step (keys: index, tag, content,
// observation when present, raw when present) followed by one trailer object
// per episode carrying scenario, episode, outcome, reward and goals.

inline json step_to_json(const Step& s) {
  json j;
  j["index"] = s.index;
  j["tag"] = std::string(tag_text(s.tag));
  j["content"] = s.content;
  if (s.observation) j["observation"] = *s.observation;
  if (s.raw) j["raw"] = *s.raw;
  return j;
}

inline Step step_from_json(const json& j) {
  Step s;
  s.index = j.at("index").get<int>();
  auto tag = tag_from_text(j.at("tag").get<std::string>());
  if (!tag) throw ParseError("unknown tag in step record: " + j.at("tag").get<std::string>());
  s.tag = *tag;
  s.content = j.at("content").get<std::string>();
  if (j.contains("observation")) s.observation = j.at("observation").get<std::string>();
  if (j.contains("raw")) s.raw = j.at("raw").get<std::string>();
  return s;
}

inline json goal_to_json(const Goal& g) {
  json j;
  j["id"] = g.id;
  j["text"] = g.text;
  j["status"] = std::string(goal_status_text(g.status));
  j["proposed_at"] = g.proposed_at;
  return j;
}

inline Goal goal_from_json(const json& j) {
  Goal g;
  g.id = j.at("id").get<int>();
  g.text = j.at("text").get<std::string>();
  auto st = goal_status_from_text(j.at("status").get<std::string>());
  if (!st) throw ParseError("unknown goal status: " + j.at("status").get<std::string>());
  g.status = *st;
  g.proposed_at = j.at("proposed_at").get<int>();
  return g;
}

inline json episode_trailer_to_json(const Episode& e) {
  json j;
  j["scenario"] = e.scenario_id;
  j["episode"] = e.episode_index;
  j["outcome"] = std::string(outcome_text(e.outcome));
  j["reward"] = e.reward;
  json goals = json::array();
  for (const Goal& g : e.trajectory.goals) goals.push_back(goal_to_json(g));
  j["goals"] = goals;
  if (e.abort_reason) j["abort_reason"] = *e.abort_reason;
  return j;
}

// One episode as a block of JSONL lines: steps then trailer.
inline std::string episode_to_jsonl(const Episode& e) {
  std::string out;
  for (const Step& s : e.trajectory.steps) {
    out += step_to_json(s).dump();
    out += '\n';
  }
  out += episode_trailer_to_json(e).dump();
  out += '\n';
  return out;
}

// Parses a stream of episode blocks. Incomplete trailing blocks (steps with
// no trailer yet, or a torn final line) are ignored; `tail_complete` reports
// whether the stream ended exactly on a trailer boundary.
inline std::vector<Episode> episodes_from_jsonl(std::istream& in, bool* tail_complete = nullptr) {
  std::vector<Episode> episodes;
  std::vector<Step> pending;
  bool clean = true;
  std::string line;
  while (std::getline(in, line)) {
    if (trim_view(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      clean = false;
      break;
    }
    if (j.contains("outcome")) {
      Episode e;
      e.scenario_id = j.at("scenario").get<std::string>();
      e.episode_index = j.at("episode").get<int>();
      auto oc = outcome_from_text(j.at("outcome").get<std::string>());
      if (!oc) throw ParseError("unknown outcome: " + j.at("outcome").get<std::string>());
      e.outcome = *oc;
      e.reward = j.at("reward").get<double>();
      for (const json& gj : j.at("goals")) e.trajectory.goals.push_back(goal_from_json(gj));
      if (j.contains("abort_reason")) e.abort_reason = j.at("abort_reason").get<std::string>();
      e.trajectory.steps = std::move(pending);
      pending.clear();
      episodes.push_back(std::move(e));
    } else {
      pending.push_back(step_from_json(j));
    }
  }
  if (!pending.empty()) clean = false;
  if (tail_complete) *tail_complete = clean;
  return episodes;
}

inline json reflection_to_json(const Reflection& r) {
  json j;
  j["level"] = std::string(reflection_level_text(r.level));
  if (r.goal_text) j["goal_text"] = *r.goal_text;
  j["body"] = r.body;
  j["source_episode"] = r.source_episode;
  j["source_scenario"] = r.source_scenario;
  return j;
}

inline Reflection reflection_from_json(const json& j) {
  Reflection r;
  auto level = reflection_level_from_text(j.at("level").get<std::string>());
  if (!level) throw ParseError("unknown reflection level: " + j.at("level").get<std::string>());
  r.level = *level;
  if (j.contains("goal_text")) r.goal_text = j.at("goal_text").get<std::string>();
  r.body = j.at("body").get<std::string>();
  r.source_episode = j.at("source_episode").get<int>();
  r.source_scenario = j.at("source_scenario").get<std::string>();
  return r;
}

}  // namespace hicrl
