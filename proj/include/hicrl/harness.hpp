// Multi-episode experiment runner: schedules scenarios across workers, runs
// up to N episodes each with sticky success, applies the per-mode learning
// rule between failures, persists everything incrementally as JSONL, and can
// resume an interrupted run to the byte-identical transcript an
// uninterrupted run would have produced.
//
// Run directory layout:
//   manifest.json      config digest + scenario table, written once up front
//   episodes.jsonl     step lines + one trailer line per episode, appended
//   reflections.jsonl  one line per episode's reflection batch, appended
//   report.json        metrics, written last (absent while interrupted)
#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hicrl/backend.hpp"
#include "hicrl/core.hpp"
#include "hicrl/engine.hpp"
#include "hicrl/envs/bundled.hpp"
#include "hicrl/hmr.hpp"
#include "hicrl/promptlib.hpp"

namespace hicrl {

inline constexpr std::string_view kManifestVersion = "hicrl-run-v1";

struct HarnessConfig {
  std::string env_id = std::string(kMiniHouseId);
  int episodes = 5;
  std::size_t memory_budget = kDefaultMemoryBudget;
  bool include_tail = false;             // HMR: also reflect on the unfinished tail
  std::vector<std::uint64_t> seeds;      // empty = the bundled scenario set
  int workers = 1;
  RunConfig run;                         // engine knobs; run.mode is the ablation mode
};

inline void validate_harness_config(const HarnessConfig& c) {
  validate_run_config(c.run);
  if (c.episodes < 1) throw ConfigError("episodes must be >= 1");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  if (c.memory_budget < 1) throw ConfigError("memory_budget must be >= 1");
  make_env(c.env_id, 0);  // throws UnknownEnv for bad ids
}

inline std::vector<std::uint64_t> effective_seeds(const HarnessConfig& c) {
  return c.seeds.empty() ? bundled_seeds(c.env_id) : c.seeds;
}

// Digest over everything that affects the transcript. Resume refuses to
// continue a directory whose digest does not match the current config.
inline std::string harness_config_digest(const HarnessConfig& c) {
  json j;
  j["env"] = c.env_id;
  j["mode"] = std::string(mode_text(c.run.mode));
  j["episodes"] = c.episodes;
  j["memory_budget"] = c.memory_budget;
  j["include_tail"] = c.include_tail;
  j["seeds"] = effective_seeds(c);
  j["max_env_steps"] = c.run.max_env_steps;
  j["max_goals"] = c.run.max_goals;
  j["max_parse_retries"] = c.run.max_parse_retries;
  j["gamma"] = c.run.gamma;
  j["char_budget"] = c.run.char_budget;
  return hex_digest(j.dump());
}

// --- Metering wrapper ------------------------------------------------------

// Sums token usage across all completions of a run (episodes and
// reflections); safe to share across scenario workers.
class MeterBackend : public Backend {
 public:
  explicit MeterBackend(Backend& inner) : inner_(inner) {}

  CompletionResponse complete(const CompletionRequest& request) override {
    CompletionResponse resp = inner_.complete(request);
    std::lock_guard<std::mutex> lock(mu_);
    usage_.prompt_tokens += resp.usage.prompt_tokens;
    usage_.completion_tokens += resp.usage.completion_tokens;
    ++calls_;
    return resp;
  }

  TokenUsage usage() const {
    std::lock_guard<std::mutex> lock(mu_);
    return usage_;
  }
  std::size_t calls() const {
    std::lock_guard<std::mutex> lock(mu_);
    return calls_;
  }

 private:
  Backend& inner_;
  mutable std::mutex mu_;
  TokenUsage usage_;
  std::size_t calls_ = 0;
};

// --- Report types ----------------------------------------------------------

struct EpisodeBrief {
  int episode = 1;
  Outcome outcome = Outcome::Truncated;
  double reward = 0.0;
  int actions = 0;
  int goals = 0;
  std::optional<std::string> abort_reason;
};

inline EpisodeBrief brief_of(const Episode& e) {
  EpisodeBrief b;
  b.episode = e.episode_index;
  b.outcome = e.outcome;
  b.reward = e.reward;
  for (const Step& s : e.trajectory.steps) b.actions += s.tag == Tag::Action ? 1 : 0;
  b.goals = static_cast<int>(e.trajectory.goals.size());
  b.abort_reason = e.abort_reason;
  return b;
}

struct ScenarioResult {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string task_type;
  std::string status;  // success | failed | exhausted | aborted | incomplete
  std::optional<int> first_success_episode;
  std::vector<EpisodeBrief> episodes;
};

struct RunReport {
  std::string env_id;
  Mode mode = Mode::Hmr;
  int episodes = 5;
  std::string config_digest;
  std::vector<ScenarioResult> per_scenario;
  std::map<int, double> success_at;
  std::map<std::string, std::map<int, double>> per_task_type;
  TokenUsage usage;
  std::size_t calls = 0;
  bool interrupted = false;
};

// success_at[k] = |scenarios with first_success_episode <= k| / |scenarios|,
// guarded to 0 on an empty denominator. Sticky by construction: the
// counting predicate is monotone in k.
inline std::map<int, double> success_at_map(const std::vector<ScenarioResult>& scenarios,
                                            int episodes) {
  std::map<int, double> out;
  for (int k = 1; k <= episodes; ++k) {
    if (scenarios.empty()) {
      out[k] = 0.0;
      continue;
    }
    int hits = 0;
    for (const ScenarioResult& s : scenarios) {
      if (s.first_success_episode && *s.first_success_episode <= k) ++hits;
    }
    out[k] = static_cast<double>(hits) / static_cast<double>(scenarios.size());
  }
  return out;
}

inline void compute_metrics(RunReport& report) {
  report.success_at = success_at_map(report.per_scenario, report.episodes);
  report.per_task_type.clear();
  std::map<std::string, std::vector<ScenarioResult>> by_type;
  for (const ScenarioResult& s : report.per_scenario) by_type[s.task_type].push_back(s);
  for (const auto& [type, group] : by_type) {
    report.per_task_type[type] = success_at_map(group, report.episodes);
  }
}

inline json report_to_json(const RunReport& r) {
  json j;
  j["version"] = "hicrl-report-v1";
  j["env"] = r.env_id;
  j["mode"] = std::string(mode_text(r.mode));
  j["episodes"] = r.episodes;
  j["config_digest"] = r.config_digest;
  json scenarios = json::array();
  for (const ScenarioResult& s : r.per_scenario) {
    json sj;
    sj["id"] = s.scenario_id;
    sj["seed"] = s.seed;
    sj["task_type"] = s.task_type;
    sj["status"] = s.status;
    sj["first_success_episode"] =
        s.first_success_episode ? json(*s.first_success_episode) : json(nullptr);
    json eps = json::array();
    for (const EpisodeBrief& b : s.episodes) {
      json ej;
      ej["episode"] = b.episode;
      ej["outcome"] = std::string(outcome_text(b.outcome));
      ej["reward"] = b.reward;
      ej["actions"] = b.actions;
      ej["goals"] = b.goals;
      if (b.abort_reason) ej["abort_reason"] = *b.abort_reason;
      eps.push_back(std::move(ej));
    }
    sj["episodes"] = std::move(eps);
    scenarios.push_back(std::move(sj));
  }
  j["scenarios"] = std::move(scenarios);
  auto rate_map = [](const std::map<int, double>& m) {
    json out = json::object();
    for (const auto& [k, v] : m) out[std::to_string(k)] = v;
    return out;
  };
  j["success_at"] = rate_map(r.success_at);
  json per_type = json::object();
  for (const auto& [type, m] : r.per_task_type) per_type[type] = rate_map(m);
  j["per_task_type"] = std::move(per_type);
  j["usage"] = {{"prompt_tokens", r.usage.prompt_tokens},
                {"completion_tokens", r.usage.completion_tokens},
                {"calls", r.calls}};
  return j;
}

inline std::string render_report_table(const RunReport& r) {
  std::ostringstream out;
  out << "mode=" << mode_text(r.mode) << " env=" << r.env_id
      << " scenarios=" << r.per_scenario.size() << " episodes=" << r.episodes;
  if (r.interrupted) out << " (interrupted)";
  out << "\n";
  char buf[64];
  out << "success_at:";
  for (const auto& [k, v] : r.success_at) {
    std::snprintf(buf, sizeof buf, " ep%d=%.3f", k, v);
    out << buf;
  }
  out << "\n";
  if (r.per_task_type.size() > 1) {
    for (const auto& [type, m] : r.per_task_type) {
      int n = 0;
      for (const ScenarioResult& s : r.per_scenario) n += s.task_type == type ? 1 : 0;
      std::snprintf(buf, sizeof buf, "  %-10s n=%-3d", type.c_str(), n);
      out << buf;
      for (const auto& [k, v] : m) {
        std::snprintf(buf, sizeof buf, " ep%d=%.3f", k, v);
        out << buf;
      }
      out << "\n";
    }
  }
  std::map<std::string, int> statuses;
  for (const ScenarioResult& s : r.per_scenario) ++statuses[s.status];
  out << "statuses:";
  for (const auto& [st, n] : statuses) out << " " << st << "=" << n;
  out << "\n";
  out << "tokens: prompt=" << r.usage.prompt_tokens
      << " completion=" << r.usage.completion_tokens << " calls=" << r.calls << "\n";
  return out.str();
}

// --- Persistence -----------------------------------------------------------

namespace detail {

namespace fs = std::filesystem;

inline fs::path manifest_path(const fs::path& dir) { return dir / "manifest.json"; }
inline fs::path episodes_path(const fs::path& dir) { return dir / "episodes.jsonl"; }
inline fs::path reflections_path(const fs::path& dir) { return dir / "reflections.jsonl"; }
inline fs::path report_path(const fs::path& dir) { return dir / "report.json"; }

inline void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline void append_block(const fs::path& path, const std::string& block) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw ConfigError("cannot append to " + path.string());
  out << block;
  out.flush();
  if (!out) throw ConfigError("short append to " + path.string());
}

// One reflection batch per line keeps the all-or-nothing persistence rule a
// plain line-append: either the whole batch is on disk or none of it is.
inline std::string reflection_batch_line(const std::string& scenario, int episode,
                                         const std::vector<Reflection>& entries) {
  json j;
  j["scenario"] = scenario;
  j["episode"] = episode;
  json list = json::array();
  for (const Reflection& r : entries) list.push_back(reflection_to_json(r));
  j["entries"] = std::move(list);
  return j.dump() + "\n";
}

struct ReflectionBatch {
  std::string scenario;
  int episode = 1;
  std::vector<Reflection> entries;
};

// Loads reflections.jsonl, dropping (and trimming from disk) a torn final
// line. Corruption anywhere else refuses the resume.
inline std::vector<ReflectionBatch> load_reflections(const fs::path& path) {
  std::vector<ReflectionBatch> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string line;
  std::size_t kept_bytes = 0;
  bool torn = false;
  while (std::getline(in, line)) {
    if (trim_view(line).empty()) {
      kept_bytes += line.size() + 1;
      continue;
    }
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      if (in.peek() == std::char_traits<char>::eof()) {
        torn = true;
        break;
      }
      throw CorruptManifest("corrupt reflections line in " + path.string());
    }
    try {
      ReflectionBatch batch;
      batch.scenario = j.at("scenario").get<std::string>();
      batch.episode = j.at("episode").get<int>();
      for (const json& rj : j.at("entries")) batch.entries.push_back(reflection_from_json(rj));
      out.push_back(std::move(batch));
    } catch (const std::exception& e) {
      throw CorruptManifest("corrupt reflections record in " + path.string() + ": " + e.what());
    }
    kept_bytes += line.size() + 1;
  }
  if (torn) {
    std::string keep(kept_bytes, '\0');
    std::ifstream re(path, std::ios::binary);
    re.read(keep.data(), static_cast<std::streamsize>(kept_bytes));
    write_file_atomic(path, keep);
  }
  return out;
}

// Loads episodes.jsonl; a torn tail block (crash mid-append) is trimmed from
// disk so later appends start on a clean boundary.
inline std::vector<Episode> load_episodes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  bool clean = true;
  std::vector<Episode> episodes;
  try {
    episodes = episodes_from_jsonl(in, &clean);
  } catch (const std::exception& e) {
    throw CorruptManifest("corrupt episodes file " + path.string() + ": " + e.what());
  }
  if (!clean) {
    std::string keep;
    for (const Episode& e : episodes) keep += episode_to_jsonl(e);
    write_file_atomic(path, keep);
  }
  return episodes;
}

}  // namespace detail

// --- Manifest ----------------------------------------------------------------

inline json manifest_json(const HarnessConfig& config,
                          const std::vector<Scenario>& scenarios) {
  json j;
  j["version"] = std::string(kManifestVersion);
  j["env"] = config.env_id;
  j["mode"] = std::string(mode_text(config.run.mode));
  j["episodes"] = config.episodes;
  j["config_digest"] = harness_config_digest(config);
  json table = json::array();
  for (const Scenario& s : scenarios) {
    table.push_back({{"id", s.id},
                     {"seed", s.seed},
                     {"task_type", s.task_type},
                     {"task", s.task_text}});
  }
  j["scenarios"] = std::move(table);
  return j;
}

// --- The runner --------------------------------------------------------------

// Called after each persisted unit of work; return true to stop the run
// (tests use this to simulate kills at exact boundaries). `stage` is
// "episode" or "reflections".
using StopHook = std::function<bool(const std::string& scenario_id, int episode, const std::string& stage)>;

namespace detail {

struct ScenarioProgress {
  std::vector<Episode> episodes;                   // persisted, ascending
  std::map<int, std::vector<Reflection>> batches;  // persisted reflection batches
};

struct RunContext {
  const HarnessConfig* config = nullptr;
  const PromptLibrary* library = nullptr;
  MeterBackend* meter = nullptr;
  ScriptedBackend* scripted = nullptr;  // non-null when the raw backend replays fixtures
  fs::path dir;
  std::mutex writer;  // serializes appends; one writer owns the directory
  std::atomic<bool> stop{false};
  StopHook hook;
  std::ostream* log = nullptr;

  bool fire_hook(const std::string& scenario, int episode, const char* stage) {
    if (hook && hook(scenario, episode, stage)) stop.store(true);
    return stop.load();
  }
};

inline std::vector<Reflection> make_reflections(const Episode& episode, const Scenario& scenario,
                                                RunContext& ctx) {
  const HarnessConfig& cfg = *ctx.config;
  ReflectionExemplars ex = ctx.library->exemplars();
  switch (cfg.run.mode) {
    case Mode::Reflexion:
      return {reflect_full(episode, scenario.task_text, *ctx.meter, ex)};
    case Mode::Hmr:
    case Mode::Notag: {
      // A parse abort can end an episode before any goal exists; there is
      // nothing for either reflection level to work on then.
      if (episode.trajectory.goals.empty()) return {};
      HmrOptions opts;
      opts.include_tail = cfg.include_tail;
      opts.render_style =
          cfg.run.mode == Mode::Notag ? RenderStyle::Plain : RenderStyle::Tagged;
      return run_hmr(episode, scenario.task_text, *ctx.meter, ex, opts, ctx.log);
    }
    case Mode::Retry:
      return {};  // retry keeps raw trajectories, not reflections
  }
  return {};
}

// Applies one failed episode to memory: reflections for the learning modes,
// a raw rendered trajectory for retry mode.
inline void absorb_failure(LongTermMemory& memory, const Episode& episode,
                           const std::vector<Reflection>& reflections, Mode mode) {
  if (mode == Mode::Retry) {
    memory.raw_attempts.push_back(render_trajectory(episode.trajectory));
  } else if (!reflections.empty()) {
    memory = record_reflections(memory, reflections);
  }
}

// Terminal status implied by a finished episode, or "" when the scenario
// should continue. Budget overruns end the scenario as exhausted (the
// expected retry-mode outcome); auth/transport problems abort it.
inline std::string episode_status(const Episode& e) {
  if (e.outcome == Outcome::Success) return "success";
  if (e.abort_reason) {
    const std::string& r = *e.abort_reason;
    if (r.rfind("budget:", 0) == 0) return "exhausted";
    if (r.rfind("auth:", 0) == 0 || r.rfind("transport:", 0) == 0) return "aborted";
  }
  return "";
}

inline ScenarioResult run_scenario(const Scenario& scenario, ScenarioProgress progress,
                                   RunContext& ctx) {
  const HarnessConfig& cfg = *ctx.config;
  ScenarioResult result;
  result.scenario_id = scenario.id;
  result.seed = scenario.seed;
  result.task_type = scenario.task_type;

  LongTermMemory memory;
  memory.budget = cfg.memory_budget;
  const std::vector<FewShotExample> examples =
      ctx.library->examples_for(scenario.env_id, scenario.task_type);

  // Replay persisted episodes into memory and find where to pick up.
  int next_episode = 1;
  for (const Episode& e : progress.episodes) {
    result.episodes.push_back(brief_of(e));
    next_episode = e.episode_index + 1;
    std::string status = episode_status(e);
    if (status == "success") {
      result.first_success_episode = e.episode_index;
      result.status = status;
      return result;
    }
    if (!status.empty()) {
      result.status = status;
      return result;
    }
    if (e.episode_index >= cfg.episodes) {
      result.status = "failed";
      return result;
    }
    auto it = progress.batches.find(e.episode_index);
    if (it != progress.batches.end()) {
      absorb_failure(memory, e, it->second, cfg.run.mode);
      continue;
    }
    if (cfg.run.mode == Mode::Retry) {
      absorb_failure(memory, e, {}, cfg.run.mode);
      continue;
    }
    // Crash window: the episode persisted but its reflections did not. With
    // a scripted backend the reflection completions live behind the
    // episode's in the same session, so re-run the episode in memory first
    // to advance the fixture cursor to the right spot.
    try {
      if (ctx.scripted) {
        ctx.scripted->begin(scenario.id, e.episode_index);
        auto env = make_env(scenario.env_id, scenario.seed);
        (void)run_episode(*env, *ctx.meter, memory, examples, cfg.run, e.episode_index, ctx.log);
      }
      std::vector<Reflection> fresh = make_reflections(e, scenario, ctx);
      if (!fresh.empty()) {
        std::lock_guard<std::mutex> lock(ctx.writer);
        append_block(reflections_path(ctx.dir),
                     reflection_batch_line(scenario.id, e.episode_index, fresh));
      }
      absorb_failure(memory, e, fresh, cfg.run.mode);
    } catch (const BudgetError&) {
      result.status = "exhausted";
      return result;
    } catch (const AuthError&) {
      result.status = "aborted";
      return result;
    } catch (const TransportError&) {
      result.status = "aborted";
      return result;
    }
    if (ctx.fire_hook(scenario.id, e.episode_index, "reflections")) {
      result.status = "incomplete";
      return result;
    }
  }

  for (int ep = next_episode; ep <= cfg.episodes; ++ep) {
    if (ctx.stop.load()) {
      result.status = "incomplete";
      return result;
    }
    if (ctx.scripted) ctx.scripted->begin(scenario.id, ep);
    auto env = make_env(scenario.env_id, scenario.seed);
    Episode e = run_episode(*env, *ctx.meter, memory, examples, cfg.run, ep, ctx.log);
    {
      std::lock_guard<std::mutex> lock(ctx.writer);
      append_block(episodes_path(ctx.dir), episode_to_jsonl(e));
    }
    result.episodes.push_back(brief_of(e));
    bool stopping = ctx.fire_hook(scenario.id, ep, "episode");
    std::string status = episode_status(e);
    if (status == "success") result.first_success_episode = ep;
    if (!status.empty()) {
      result.status = status;
      return result;
    }
    if (stopping || ep == cfg.episodes) break;
    try {
      std::vector<Reflection> fresh = make_reflections(e, scenario, ctx);
      if (!fresh.empty()) {
        std::lock_guard<std::mutex> lock(ctx.writer);
        append_block(reflections_path(ctx.dir), reflection_batch_line(scenario.id, ep, fresh));
      }
      absorb_failure(memory, e, fresh, cfg.run.mode);
    } catch (const BudgetError&) {
      result.status = "exhausted";
      return result;
    } catch (const AuthError&) {
      result.status = "aborted";
      return result;
    } catch (const TransportError&) {
      result.status = "aborted";
      return result;
    }
    if (ctx.fire_hook(scenario.id, ep, "reflections")) break;
  }

  if (ctx.stop.load() && result.episodes.size() < static_cast<std::size_t>(cfg.episodes)) {
    result.status = "incomplete";
  } else {
    result.status = "failed";
  }
  return result;
}

}  // namespace detail

// Builds the scenario table for a config (bundled seeds unless overridden).
inline std::vector<Scenario> harness_scenarios(const HarnessConfig& config) {
  std::vector<Scenario> out;
  for (std::uint64_t seed : effective_seeds(config)) {
    out.push_back(make_env(config.env_id, seed)->scenario());
  }
  return out;
}

// Runs (or resumes) an experiment in `dir`. The backend is wrapped in a
// token meter; pass a ScriptedBackend for deterministic offline runs. The
// returned report is also written to report.json unless a stop hook
// interrupted the run.
inline RunReport run_experiment(const HarnessConfig& config, Backend& backend,
                                const std::string& dir, const PromptLibrary& library,
                                StopHook stop_hook = nullptr, std::ostream* log = nullptr) {
  namespace fs = std::filesystem;
  validate_harness_config(config);
  const std::vector<Scenario> scenarios = harness_scenarios(config);
  fs::create_directories(dir);

  const fs::path dirp(dir);
  const std::string digest = harness_config_digest(config);
  if (fs::exists(detail::manifest_path(dirp))) {
    json m;
    try {
      std::ifstream in(detail::manifest_path(dirp), std::ios::binary);
      m = json::parse(in);
    } catch (const std::exception& e) {
      throw CorruptManifest("unreadable manifest in " + dir + ": " + e.what());
    }
    if (m.value("version", "") != kManifestVersion) {
      throw CorruptManifest("unsupported manifest version in " + dir);
    }
    if (m.value("config_digest", "") != digest) {
      throw CorruptManifest("config digest mismatch in " + dir +
                            " (refusing to mix runs with different configs)");
    }
  } else {
    if (fs::exists(detail::episodes_path(dirp)) &&
        fs::file_size(detail::episodes_path(dirp)) > 0) {
      throw CorruptManifest("episodes without a manifest in " + dir);
    }
    detail::write_file_atomic(detail::manifest_path(dirp),
                              manifest_json(config, scenarios).dump(2) + "\n");
  }

  // Load persisted progress (trimming torn tails from a crashed append).
  std::map<std::string, detail::ScenarioProgress> progress;
  for (Episode& e : detail::load_episodes(detail::episodes_path(dirp))) {
    detail::ScenarioProgress& p = progress[e.scenario_id];
    if (e.episode_index != static_cast<int>(p.episodes.size()) + 1) {
      throw CorruptManifest("non-contiguous episodes for " + e.scenario_id + " in " + dir);
    }
    p.episodes.push_back(std::move(e));
  }
  for (detail::ReflectionBatch& b : detail::load_reflections(detail::reflections_path(dirp))) {
    progress[b.scenario].batches[b.episode] = std::move(b.entries);
  }

  MeterBackend meter(backend);
  detail::RunContext ctx;
  ctx.config = &config;
  ctx.library = &library;
  ctx.meter = &meter;
  ctx.scripted = dynamic_cast<ScriptedBackend*>(&backend);
  ctx.dir = dirp;
  ctx.hook = std::move(stop_hook);
  ctx.log = log;

  std::vector<ScenarioResult> results(scenarios.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= scenarios.size() || ctx.stop.load()) return;
      detail::ScenarioProgress p;
      if (auto it = progress.find(scenarios[i].id); it != progress.end()) p = it->second;
      results[i] = detail::run_scenario(scenarios[i], std::move(p), ctx);
    }
  };
  // Scripted replay shares one session cursor, so it only makes sense on a
  // single worker; parallelism is for live backends.
  const int nworkers =
      ctx.scripted ? 1
                   : static_cast<int>(std::min<std::size_t>(std::max(1, config.workers),
                                                            scenarios.size()));
  if (nworkers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  RunReport report;
  report.env_id = config.env_id;
  report.mode = config.run.mode;
  report.episodes = config.episodes;
  report.config_digest = digest;
  report.per_scenario = std::move(results);
  report.usage = meter.usage();
  report.calls = meter.calls();
  report.interrupted = ctx.stop.load();
  // Workers stopped early leave default-constructed slots; mark them.
  for (std::size_t i = 0; i < report.per_scenario.size(); ++i) {
    ScenarioResult& s = report.per_scenario[i];
    if (s.scenario_id.empty()) {
      s.scenario_id = scenarios[i].id;
      s.seed = scenarios[i].seed;
      s.task_type = scenarios[i].task_type;
      s.status = "incomplete";
      report.interrupted = true;
    }
    if (s.status == "incomplete") report.interrupted = true;
  }
  compute_metrics(report);
  if (!report.interrupted) {
    detail::write_file_atomic(detail::report_path(dirp), report_to_json(report).dump(2) + "\n");
  }
  return report;
}

// Reconstructs a report from a run directory's persisted state. Used by the
// report subcommand so it works on finished and interrupted runs alike;
// token usage comes from report.json when present (episodes.jsonl does not
// record it).
inline RunReport report_from_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path dirp(dir);
  if (!fs::exists(detail::manifest_path(dirp))) {
    throw CorruptManifest("no manifest.json in " + dir);
  }
  json m;
  try {
    std::ifstream in(detail::manifest_path(dirp), std::ios::binary);
    m = json::parse(in);
  } catch (const std::exception& e) {
    throw CorruptManifest("unreadable manifest in " + dir + ": " + e.what());
  }
  RunReport report;
  report.env_id = m.value("env", "");
  if (auto mode = mode_from_text(m.value("mode", ""))) report.mode = *mode;
  report.episodes = m.value("episodes", 5);
  report.config_digest = m.value("config_digest", "");

  std::map<std::string, std::vector<Episode>> by_scenario;
  {
    std::ifstream in(detail::episodes_path(dirp), std::ios::binary);
    if (in) {
      for (Episode& e : episodes_from_jsonl(in)) by_scenario[e.scenario_id].push_back(std::move(e));
    }
  }
  for (const json& sj : m.value("scenarios", json::array())) {
    ScenarioResult s;
    s.scenario_id = sj.value("id", "");
    s.seed = sj.value("seed", std::uint64_t{0});
    s.task_type = sj.value("task_type", "");
    auto it = by_scenario.find(s.scenario_id);
    if (it != by_scenario.end()) {
      for (const Episode& e : it->second) {
        s.episodes.push_back(brief_of(e));
        std::string status = detail::episode_status(e);
        if (status == "success") s.first_success_episode = e.episode_index;
        if (!status.empty()) s.status = status;
      }
    }
    if (s.status.empty()) {
      s.status = s.episodes.size() >= static_cast<std::size_t>(report.episodes) ? "failed"
                                                                                : "incomplete";
    }
    if (s.status == "incomplete") report.interrupted = true;
    report.per_scenario.push_back(std::move(s));
  }
  compute_metrics(report);
  if (fs::exists(detail::report_path(dirp))) {
    try {
      std::ifstream in(detail::report_path(dirp), std::ios::binary);
      json r = json::parse(in);
      report.usage.prompt_tokens = r.at("usage").value("prompt_tokens", std::int64_t{0});
      report.usage.completion_tokens = r.at("usage").value("completion_tokens", std::int64_t{0});
      report.calls = r.at("usage").value("calls", std::size_t{0});
    } catch (const std::exception&) {
      // report.json is derived data; ignore a bad one
    }
  }
  return report;
}

}  // namespace hicrl
