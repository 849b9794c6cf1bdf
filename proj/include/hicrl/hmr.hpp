// Hindsight Modular Reflection: segments a failed episode at finished-goal
// boundaries, asks the backend for one low-level reflection per finished
// segment and one high-level reflection over the goal sequence, and routes
// stored reflections to the cue that can act on them. Also the full-
// trajectory reflection used by the reflexion ablation.
#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hicrl/backend.hpp"
#include "hicrl/core.hpp"
#include "hicrl/promptkit.hpp"

namespace hicrl {

struct SubTrajectory {
  std::optional<Goal> goal;  // the goal served at the segment's end
  std::vector<Step> steps;
  bool finished = false;  // ends with Finish=Yes
};

// Splits steps at each Finish=Yes boundary. One segment per finished goal,
// in order, plus a trailing open segment when steps follow the last
// boundary. Concatenating all segments reproduces the step list exactly.
inline std::vector<SubTrajectory> segment_by_finish(const Trajectory& t) {
  std::vector<SubTrajectory> out;
  SubTrajectory current;
  int goals_seen = 0;
  for (const Step& step : t.steps) {
    if (step.tag == Tag::Goal) {
      ++goals_seen;
      if (goals_seen <= static_cast<int>(t.goals.size())) {
        current.goal = t.goals[goals_seen - 1];
      }
    }
    current.steps.push_back(step);
    if (step.tag == Tag::Finish && step.content == "Yes") {
      current.finished = true;
      out.push_back(std::move(current));
      current = SubTrajectory{};
    }
  }
  if (!current.steps.empty()) {
    current.finished = false;
    out.push_back(std::move(current));
  }
  return out;
}

struct HmrOptions {
  std::size_t body_cap = kDefaultReflectionBodyCap;
  // Reflect on the unfinished tail segment too. Off by default so a failed
  // episode with n finished goals yields exactly n+1 entries.
  bool include_tail = false;
  // Tag-free runs render the reflected-on steps in the same plain style the
  // model saw when it produced them.
  RenderStyle render_style = RenderStyle::Tagged;
};

struct ReflectionExemplars {
  std::vector<std::string> low;   // bundled: 2
  std::vector<std::string> high;  // bundled: 1, reused for the full level
};

namespace detail {

inline CompletionRequest reflection_request(std::string prompt, RoleHint hint) {
  CompletionRequest req;
  req.prompt = std::move(prompt);
  req.max_tokens = 96;  // "one or two sentences"
  req.role_hint = hint;
  return req;
}

}  // namespace detail

// Low-level reflection on one finished segment; the goal text replaces the
// task objective. Returns nothing when the model answers the sentinel.
inline std::optional<Reflection> reflect_low(const SubTrajectory& segment, Backend& backend,
                                             const ReflectionExemplars& exemplars,
                                             const Episode& source,
                                             std::size_t body_cap = kDefaultReflectionBodyCap,
                                             RenderStyle style = RenderStyle::Tagged) {
  std::string prompt = make_low_reflection_prompt(
      segment.goal->text, render_steps(segment.steps, 0, segment.steps.size(), style),
      exemplars.low);
  CompletionResponse resp =
      backend.complete(detail::reflection_request(std::move(prompt), RoleHint::ReflectLow));
  std::string body = trim(resp.text);
  if (is_reflection_sentinel(body)) return std::nullopt;
  return make_reflection(ReflectionLevel::Low, segment.goal->text, body, source.episode_index,
                         source.scenario_id, body_cap);
}

// High-level reflection over the whole goal sequence. Always yields exactly
// one entry; a sentinel answer is stored as-is (the count law fixes the
// number of high-level entries at one).
inline Reflection reflect_high(const std::vector<Goal>& goals, std::string_view task,
                               Backend& backend, const ReflectionExemplars& exemplars,
                               const Episode& source,
                               std::size_t body_cap = kDefaultReflectionBodyCap) {
  if (goals.empty()) throw std::invalid_argument("reflect_high needs at least one goal");
  std::string prompt = make_high_reflection_prompt(goals, task, exemplars.high);
  CompletionResponse resp =
      backend.complete(detail::reflection_request(std::move(prompt), RoleHint::ReflectHigh));
  return make_reflection(ReflectionLevel::High, std::nullopt, trim(resp.text),
                         source.episode_index, source.scenario_id, body_cap);
}

// Reflexion-style reflection over the entire trajectory (mode = reflexion).
inline Reflection reflect_full(const Episode& episode, std::string_view task, Backend& backend,
                               const ReflectionExemplars& exemplars,
                               std::size_t body_cap = kDefaultReflectionBodyCap) {
  std::string prompt =
      make_full_reflection_prompt(task, render_trajectory(episode.trajectory), exemplars.high);
  CompletionResponse resp =
      backend.complete(detail::reflection_request(std::move(prompt), RoleHint::ReflectFull));
  return make_reflection(ReflectionLevel::Full, std::nullopt, trim(resp.text),
                         episode.episode_index, episode.scenario_id, body_cap);
}

// Runs HMR over a failed episode: one low-level reflection per finished
// segment (sentinels drop theirs), then exactly one high-level reflection.
// Backend errors propagate; the caller persists all-or-nothing.
inline std::vector<Reflection> run_hmr(const Episode& episode, std::string_view task,
                                       Backend& backend, const ReflectionExemplars& exemplars,
                                       const HmrOptions& options = {},
                                       std::ostream* warnings = nullptr) {
  if (episode.outcome == Outcome::Success) {
    throw std::invalid_argument("run_hmr is only defined for non-success episodes");
  }
  std::vector<Reflection> out;
  for (const SubTrajectory& segment : segment_by_finish(episode.trajectory)) {
    if (!segment.finished && !options.include_tail) continue;
    bool has_action = false;
    for (const Step& s : segment.steps) has_action |= s.tag == Tag::Action;
    if (!segment.goal || !has_action) {
      if (warnings) {
        *warnings << "[hmr] skipping degenerate segment (no goal or no actions) in "
                  << episode.scenario_id << " episode " << episode.episode_index << "\n";
      }
      continue;
    }
    if (auto r = reflect_low(segment, backend, exemplars, episode, options.body_cap,
                             options.render_style)) {
      out.push_back(std::move(*r));
    }
  }
  out.push_back(
      reflect_high(episode.trajectory.goals, task, backend, exemplars, episode, options.body_cap));
  return out;
}

// Which stored lessons belong in the prompt for a cue: Goal sees high-level
// (and full) entries, Think/Action see low-level (and full), Finish none.
inline std::vector<Reflection> route_reflections(const LongTermMemory& memory, Tag cue) {
  std::vector<Reflection> out;
  if (cue == Tag::Finish) return out;
  for (const Reflection& r : memory.reflections) {
    bool wanted = r.level == ReflectionLevel::Full ||
                  (cue == Tag::Goal ? r.level == ReflectionLevel::High
                                    : r.level == ReflectionLevel::Low);
    if (wanted) out.push_back(r);
  }
  return out;
}

}  // namespace hicrl
