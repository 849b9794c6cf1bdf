// The HCRL decision loop: sequences Goal/Think/Action/Finish cues, queries
// the backend, parses completions, steps the environment, and emits an
// Episode. Also the free-form loop for the tag-free ablation, where the
// model announces its own step type each turn.
#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hicrl/backend.hpp"
#include "hicrl/core.hpp"
#include "hicrl/envs/env.hpp"
#include "hicrl/hmr.hpp"
#include "hicrl/promptkit.hpp"

namespace hicrl {

enum class Mode { Hmr, Reflexion, Retry, Notag };

inline std::string_view mode_text(Mode m) {
  switch (m) {
    case Mode::Hmr: return "hmr";
    case Mode::Reflexion: return "reflexion";
    case Mode::Retry: return "retry";
    case Mode::Notag: return "notag";
  }
  return "hmr";
}

inline std::optional<Mode> mode_from_text(std::string_view s) {
  if (s == "hmr") return Mode::Hmr;
  if (s == "reflexion") return Mode::Reflexion;
  if (s == "retry") return Mode::Retry;
  if (s == "notag") return Mode::Notag;
  return std::nullopt;
}

struct RunConfig {
  int max_env_steps = 0;  // 0 = environment default (40 house, 15 shop, 12 wiki)
  int max_goals = 10;
  int max_parse_retries = 3;
  double gamma = 1.0;  // discount applied to the terminal reward over action steps
  std::size_t char_budget = 24000;
  Mode mode = Mode::Hmr;
};

inline void validate_run_config(const RunConfig& c) {
  if (c.max_env_steps < 0) throw ConfigError("max_env_steps must be >= 0");
  if (c.max_goals < 1) throw ConfigError("max_goals must be >= 1");
  if (c.max_parse_retries < 1) throw ConfigError("max_parse_retries must be >= 1");
  if (!(c.gamma > 0.0) || c.gamma > 1.0) throw ConfigError("gamma must be in (0, 1]");
  if (c.char_budget < 1) throw ConfigError("char_budget must be >= 1");
}

enum class Phase { NeedGoal, NeedThink, NeedAction, NeedFinish, Done };

struct EngineState {
  Phase phase = Phase::NeedGoal;
  std::optional<Goal> active_goal;
  int steps_taken = 0;
  int goals_proposed = 0;
};

// Pure cue scheduler. Termination (environment done, step cap, goal cap)
// dominates every phase. run_episode drives all transitions through this
// function except action->finish, which it takes unconditionally so that the
// finisher is consulted even for the episode's final action.
inline Phase next_cue(const EngineState& s, std::optional<bool> finish_verdict, bool env_done,
                      int step_cap, int max_goals) {
  if (env_done || s.steps_taken >= step_cap || s.goals_proposed > max_goals) return Phase::Done;
  switch (s.phase) {
    case Phase::NeedGoal: return Phase::NeedThink;
    case Phase::NeedThink: return Phase::NeedAction;
    case Phase::NeedAction: return Phase::NeedFinish;
    case Phase::NeedFinish:
      return finish_verdict.value_or(false) ? Phase::NeedGoal : Phase::NeedAction;
    case Phase::Done: return Phase::Done;
  }
  return Phase::Done;
}

namespace detail {

inline RoleHint role_of(Tag cue) {
  switch (cue) {
    case Tag::Goal: return RoleHint::Goal;
    case Tag::Think: return RoleHint::Think;
    case Tag::Action: return RoleHint::Action;
    case Tag::Finish: return RoleHint::Finish;
  }
  return RoleHint::Goal;
}

inline Tag cue_of(Phase p) {
  switch (p) {
    case Phase::NeedGoal: return Tag::Goal;
    case Phase::NeedThink: return Tag::Think;
    case Phase::NeedAction: return Tag::Action;
    case Phase::NeedFinish: return Tag::Finish;
    case Phase::Done: break;
  }
  throw std::logic_error("no cue for Done phase");
}

// Shared episode bookkeeping for the tagged and plain loops.
struct EpisodeRun {
  Episode episode;
  std::string task;
  EngineState state;
  bool env_done = false;
  double terminal_reward = 0.0;
  int consecutive_parse_errors = 0;
  std::string abort_reason;
  bool parse_abort = false;

  void add_step(Tag tag, std::string content, std::optional<std::string> observation,
                std::optional<std::string> raw) {
    Step s = make_step(static_cast<int>(episode.trajectory.steps.size()), tag,
                       std::move(content), std::move(observation));
    s.raw = std::move(raw);
    episode.trajectory.steps.push_back(std::move(s));
  }

  void open_goal(const std::string& text) {
    if (state.active_goal) {  // plain mode can abandon a goal by proposing another
      episode.trajectory.goals[state.active_goal->id].status = GoalStatus::OpenAtTermination;
    }
    ++state.goals_proposed;
    Goal g;
    g.id = state.goals_proposed - 1;
    g.text = text;
    g.status = GoalStatus::Active;
    g.proposed_at = static_cast<int>(episode.trajectory.steps.size());
    episode.trajectory.goals.push_back(g);
    state.active_goal = g;
  }

  void close_goal() {
    if (!state.active_goal) return;
    episode.trajectory.goals[state.active_goal->id].status = GoalStatus::Finished;
    state.active_goal.reset();
  }

  void finalize(const RunConfig& config, int step_cap) {
    for (Goal& g : episode.trajectory.goals) {
      if (g.status == GoalStatus::Active) g.status = GoalStatus::OpenAtTermination;
    }
    if (parse_abort) {
      episode.outcome = Outcome::Failure;
      episode.abort_reason = abort_reason;
    } else if (!abort_reason.empty()) {
      episode.outcome = Outcome::Truncated;
      episode.abort_reason = abort_reason;
    } else if (env_done) {
      episode.outcome = terminal_reward >= 1.0 ? Outcome::Success : Outcome::Failure;
    } else {
      episode.outcome = Outcome::Truncated;
      episode.abort_reason = state.steps_taken >= step_cap ? "cap: max_env_steps reached"
                                                           : "cap: max_goals exceeded";
    }
    if (env_done) {
      episode.reward =
          terminal_reward *
          std::pow(config.gamma, std::max(0, state.steps_taken - 1));
    }
  }
};

}  // namespace detail

// Runs one episode. `memory` supplies routed reflections (and, in retry
// mode, the raw past attempts); `examples` are the few-shot trajectories for
// this scenario's task type. Backend failures and prompt-budget overruns end
// the episode as truncated with the reason recorded; FixtureExhausted is a
// test-setup bug and propagates.
inline Episode run_episode(Environment& env, Backend& backend, const LongTermMemory& memory,
                           const std::vector<FewShotExample>& examples, const RunConfig& config,
                           int episode_index, std::ostream* log = nullptr) {
  validate_run_config(config);
  detail::EpisodeRun run;
  run.task = env.reset();
  run.episode.scenario_id = env.scenario().id;
  run.episode.episode_index = episode_index;
  const int step_cap = config.max_env_steps > 0 ? config.max_env_steps
                                                : default_step_cap(env.scenario().env_id);
  const RenderStyle style =
      config.mode == Mode::Notag ? RenderStyle::Plain : RenderStyle::Tagged;

  // Every turn appends a step or burns a bounded parse retry, so this cap is
  // unreachable for well-behaved loops; it guards the free-form mode against
  // a model that never acts.
  const int turn_cap = 8 + 6 * step_cap + 4 * config.max_goals;
  int turns = 0;

  auto complete_for = [&](Tag cue) -> std::optional<std::string> {
    PromptBundle bundle;
    bundle.examples = examples;
    bundle.task = run.task;
    bundle.trajectory = run.episode.trajectory;
    bundle.cue = cue;
    if (config.mode == Mode::Notag) {
      bundle.reflections = memory.reflections;  // no cue routing without tags
    } else {
      bundle.reflections = route_reflections(memory, cue);
      if (cue != Tag::Finish) bundle.past_attempts = memory.raw_attempts;
    }
    if (cue == Tag::Finish) bundle.goal_context = run.state.active_goal;
    try {
      CompletionRequest req;
      req.prompt = assemble_prompt(bundle, config.char_budget, style);
      req.role_hint = detail::role_of(cue);
      CompletionResponse resp = backend.complete(req);
      if (log) {
        *log << "[engine] scenario=" << run.episode.scenario_id << " ep=" << episode_index
             << " cue=" << tag_text(cue) << " prompt=" << hex_digest(req.prompt)
             << " resp=" << hex_digest(resp.text) << "\n";
      }
      return resp.text;
    } catch (const AuthError& e) {
      run.abort_reason = std::string("auth: ") + e.what();
    } catch (const BudgetError& e) {
      run.abort_reason = std::string("budget: ") + e.what();
    } catch (const TransportError& e) {
      run.abort_reason = std::string("transport: ") + e.what();
    }
    return std::nullopt;
  };

  // Parses with retries; nullopt means the episode is aborting (backend
  // error, or too many consecutive parse failures).
  auto query = [&](Tag cue, auto parser) -> std::optional<std::pair<std::string, std::string>> {
    for (;;) {
      std::optional<std::string> raw = complete_for(cue);
      if (!raw) return std::nullopt;
      try {
        std::string value = parser(*raw);
        run.consecutive_parse_errors = 0;
        return std::make_pair(std::move(value), std::move(*raw));
      } catch (const ParseError& e) {
        if (++run.consecutive_parse_errors >= config.max_parse_retries) {
          run.abort_reason = std::string("parse: ") + e.what();
          run.parse_abort = true;
          return std::nullopt;
        }
      }
    }
  };

  // The finisher gets one retry and then conservatively defaults to No; it
  // never aborts the episode on parse trouble.
  auto query_finish = [&]() -> std::optional<std::pair<bool, std::string>> {
    std::string last_raw;
    for (int attempt = 0; attempt < 2; ++attempt) {
      std::optional<std::string> raw = complete_for(Tag::Finish);
      if (!raw) return std::nullopt;
      last_raw = *raw;
      try {
        return std::make_pair(parse_finish(*raw), std::move(*raw));
      } catch (const ParseError&) {
        continue;
      }
    }
    return std::make_pair(false, std::move(last_raw));
  };

  if (config.mode == Mode::Notag) {
    while (!run.env_done && run.state.steps_taken < step_cap &&
           run.state.goals_proposed <= config.max_goals && run.abort_reason.empty() &&
           ++turns <= turn_cap) {
      Tag hint_cue = run.state.active_goal ? Tag::Action : Tag::Goal;
      auto got = query(hint_cue, [](const std::string& raw) {
        parse_plain_step(raw);  // validate; re-parsed below to keep one code path
        return raw;
      });
      if (!got) break;
      auto [tag, content] = parse_plain_step(got->first);
      switch (tag) {
        case Tag::Goal:
          run.open_goal(content);
          run.add_step(Tag::Goal, content, std::nullopt, got->second);
          break;
        case Tag::Think:
          run.add_step(Tag::Think, content, std::nullopt, got->second);
          break;
        case Tag::Action: {
          StepResult r = env.step(content);
          ++run.state.steps_taken;
          run.add_step(Tag::Action, content, r.observation, got->second);
          if (r.done) {
            run.env_done = true;
            run.terminal_reward = r.reward;
          }
          break;
        }
        case Tag::Finish: {
          bool yes = false;
          try {
            yes = parse_finish(content);
          } catch (const ParseError&) {
            // treat an unreadable verdict as No rather than burning the turn
          }
          run.add_step(Tag::Finish, yes ? "Yes" : "No", std::nullopt, got->second);
          if (yes) run.close_goal();
          break;
        }
      }
    }
    if (turns > turn_cap && run.abort_reason.empty() && !run.env_done) {
      run.abort_reason = "cap: internal turn limit";
    }
  } else {
    while (run.state.phase != Phase::Done && run.abort_reason.empty() && ++turns <= turn_cap) {
      switch (run.state.phase) {
        case Phase::NeedGoal: {
          auto got = query(Tag::Goal, [](const std::string& r) { return parse_goal(r); });
          if (!got) break;
          run.open_goal(got->first);
          run.add_step(Tag::Goal, got->first, std::nullopt, std::nullopt);
          run.state.phase = next_cue(run.state, std::nullopt, run.env_done, step_cap,
                                     config.max_goals);
          break;
        }
        case Phase::NeedThink: {
          auto got = query(Tag::Think, [](const std::string& r) { return parse_think(r); });
          if (!got) break;
          run.add_step(Tag::Think, got->first, std::nullopt, std::nullopt);
          run.state.phase = next_cue(run.state, std::nullopt, run.env_done, step_cap,
                                     config.max_goals);
          break;
        }
        case Phase::NeedAction: {
          auto got = query(Tag::Action, [](const std::string& r) { return parse_action(r); });
          if (!got) break;
          StepResult r = env.step(got->first);
          ++run.state.steps_taken;
          run.add_step(Tag::Action, got->first, r.observation, std::nullopt);
          if (r.done) {
            run.env_done = true;
            run.terminal_reward = r.reward;
          }
          // Unconditional: the finisher is consulted after every action.
          run.state.phase = Phase::NeedFinish;
          break;
        }
        case Phase::NeedFinish: {
          auto got = query_finish();
          if (!got) break;
          run.add_step(Tag::Finish, got->first ? "Yes" : "No", std::nullopt, got->second);
          if (got->first) run.close_goal();
          run.state.phase = next_cue(run.state, got->first, run.env_done, step_cap,
                                     config.max_goals);
          break;
        }
        case Phase::Done: break;
      }
    }
    if (turns > turn_cap && run.abort_reason.empty() && run.state.phase != Phase::Done) {
      run.abort_reason = "cap: internal turn limit";
    }
  }

  run.finalize(config, step_cap);
  validate_trajectory(run.episode.trajectory);
  return run.episode;
}

}  // namespace hicrl
