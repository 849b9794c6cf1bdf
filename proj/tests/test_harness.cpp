#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hicrl/harness.hpp"
#include "support/test_util.hpp"

using namespace hicrl;
using hicrl::test::CallbackBackend;
using hicrl::test::TempDir;
using hicrl::test::read_text_file;
using hicrl::test::write_text_file;

namespace {

// A minimal in-memory prompt library so harness prompts stay small and the
// tests do not depend on the shipped data files.
PromptLibrary tiny_library() {
  PromptLibrary lib;
  lib.examples.push_back(FewShotExample{std::string(kMiniWikiId), "qa",
                                        "[Goal] demo goal\n[Think] demo think"});
  lib.low_exemplars = {"After failing to find the page, search for the exact title."};
  lib.high_exemplars = {"The goal sequence looped; propose fewer, more concrete goals."};
  return lib;
}

int wiki_oracle_len(std::uint64_t seed) {
  return static_cast<int>(make_env(kMiniWikiId, seed)->oracle_script().size());
}

// Episode completions that follow the oracle script to success. Verdicts are
// No for every action but the last; the environment decides the outcome.
std::vector<std::string> success_session(std::uint64_t seed) {
  auto env = make_env(kMiniWikiId, seed);
  std::vector<std::string> lines = {"answer the question", "follow the known route"};
  const std::vector<std::string> script = env->oracle_script();
  for (std::size_t i = 0; i < script.size(); ++i) {
    lines.push_back(script[i]);
    lines.push_back(i + 1 == script.size() ? "Yes" : "No");
  }
  return lines;
}

// Episode completions that burn `cap` no-op actions (lookup before any
// search does nothing) and declare the goal finished on the last verdict, so
// the episode truncates at the step cap with one finished segment.
std::vector<std::string> failing_session(int cap, int episode) {
  std::vector<std::string> lines = {"guess around (ep " + std::to_string(episode) + ")",
                                    "poke at the index"};
  for (int i = 1; i <= cap; ++i) {
    lines.push_back("lookup[absent]");
    lines.push_back(i == cap ? "Yes" : "No");
  }
  return lines;
}

std::vector<std::string> with_reflections(std::vector<std::string> lines, int episode) {
  lines.push_back("Low lesson " + std::to_string(episode) + ": stop poking the index.");
  lines.push_back("High lesson " + std::to_string(episode) + ": search before looking up.");
  return lines;
}

// Two-scenario fixture: miniwiki-000 fails twice and succeeds on episode 3,
// miniwiki-001 succeeds immediately.
struct WikiFixture {
  HarnessConfig config;
  ScriptedStore store;
  std::size_t total_calls = 0;
};

WikiFixture make_wiki_fixture() {
  WikiFixture f;
  f.config.env_id = std::string(kMiniWikiId);
  f.config.episodes = 3;
  f.config.seeds = {0, 1};
  f.config.run.mode = Mode::Hmr;
  const int cap = std::max(wiki_oracle_len(0), wiki_oracle_len(1));
  f.config.run.max_env_steps = cap;

  auto add = [&](const std::string& scenario, int episode, std::vector<std::string> lines) {
    f.total_calls += lines.size();
    f.store.add(scenario, episode, std::move(lines));
  };
  add("miniwiki-000", 1, with_reflections(failing_session(cap, 1), 1));
  add("miniwiki-000", 2, with_reflections(failing_session(cap, 2), 2));
  add("miniwiki-000", 3, success_session(0));
  add("miniwiki-001", 1, success_session(1));
  return f;
}

std::string episodes_file(const TempDir& dir) { return (dir.path() / "episodes.jsonl").string(); }
std::string reflections_file(const TempDir& dir) {
  return (dir.path() / "reflections.jsonl").string();
}

}  // namespace

TEST_CASE("success_at counts scenarios whose first success is within k") {
  std::vector<ScenarioResult> scenarios(3);
  scenarios[0].first_success_episode = 1;
  scenarios[1].first_success_episode = 3;
  scenarios[2].first_success_episode = std::nullopt;
  std::map<int, double> rates = success_at_map(scenarios, 4);
  CHECK(rates[1] == Catch::Approx(1.0 / 3.0));
  CHECK(rates[2] == Catch::Approx(1.0 / 3.0));
  CHECK(rates[3] == Catch::Approx(2.0 / 3.0));
  CHECK(rates[4] == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("success_at is zero-guarded on an empty scenario set") {
  std::map<int, double> rates = success_at_map({}, 5);
  REQUIRE(rates.size() == 5);
  for (const auto& [k, v] : rates) CHECK(v == 0.0);
}

TEST_CASE("success_at is monotone nondecreasing for random outcomes") {
  std::mt19937 rng(20240814);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<ScenarioResult> scenarios(1 + rng() % 12);
    for (ScenarioResult& s : scenarios) {
      int first = static_cast<int>(rng() % 7);  // 0 = never succeeded
      if (first > 0) s.first_success_episode = first;
    }
    std::map<int, double> rates = success_at_map(scenarios, 5);
    double prev = 0.0;
    for (int k = 1; k <= 5; ++k) {
      CHECK(rates[k] >= prev);
      CHECK(rates[k] >= 0.0);
      CHECK(rates[k] <= 1.0);
      prev = rates[k];
    }
  }
}

TEST_CASE("harness configs are validated up front") {
  HarnessConfig ok;
  ok.env_id = std::string(kMiniWikiId);
  CHECK_NOTHROW(validate_harness_config(ok));

  HarnessConfig bad = ok;
  bad.episodes = 0;
  CHECK_THROWS_AS(validate_harness_config(bad), ConfigError);
  bad = ok;
  bad.workers = 0;
  CHECK_THROWS_AS(validate_harness_config(bad), ConfigError);
  bad = ok;
  bad.memory_budget = 0;
  CHECK_THROWS_AS(validate_harness_config(bad), ConfigError);
  bad = ok;
  bad.env_id = "minichess";
  CHECK_THROWS_AS(validate_harness_config(bad), UnknownEnv);
  bad = ok;
  bad.run.gamma = 2.0;
  CHECK_THROWS_AS(validate_harness_config(bad), ConfigError);
}

TEST_CASE("the config digest tracks everything that shapes the transcript") {
  HarnessConfig a;
  a.env_id = std::string(kMiniWikiId);
  HarnessConfig b = a;
  CHECK(harness_config_digest(a) == harness_config_digest(b));

  b.run.mode = Mode::Retry;
  CHECK(harness_config_digest(a) != harness_config_digest(b));
  b = a;
  b.seeds = {7};
  CHECK(harness_config_digest(a) != harness_config_digest(b));
  b = a;
  b.episodes = 4;
  CHECK(harness_config_digest(a) != harness_config_digest(b));
  b = a;
  b.run.char_budget = 9999;
  CHECK(harness_config_digest(a) != harness_config_digest(b));

  // Worker count is scheduling, not transcript content.
  b = a;
  b.workers = 8;
  CHECK(harness_config_digest(a) == harness_config_digest(b));
}

TEST_CASE("the meter sums usage across completions") {
  CallbackBackend inner([](const CompletionRequest&) { return std::string("12345678"); });
  MeterBackend meter(inner);
  CompletionRequest req;
  req.prompt = std::string(40, 'x');
  meter.complete(req);
  req.prompt = std::string(80, 'y');
  meter.complete(req);
  CHECK(meter.calls() == 2);
  CHECK(meter.usage().prompt_tokens == 10 + 20);
  CHECK(meter.usage().completion_tokens == 2 + 2);
}

TEST_CASE("a scripted hmr run produces the full persisted record") {
  WikiFixture f = make_wiki_fixture();
  ScriptedBackend backend(f.store);
  TempDir dir;
  RunReport report = run_experiment(f.config, backend, dir.str(), tiny_library());

  CHECK_FALSE(report.interrupted);
  REQUIRE(report.per_scenario.size() == 2);
  const ScenarioResult& s0 = report.per_scenario[0];
  const ScenarioResult& s1 = report.per_scenario[1];
  CHECK(s0.scenario_id == "miniwiki-000");
  CHECK(s0.status == "success");
  CHECK(s0.first_success_episode == 3);
  REQUIRE(s0.episodes.size() == 3);
  CHECK(s0.episodes[0].outcome == Outcome::Truncated);
  CHECK(s0.episodes[0].abort_reason == "cap: max_env_steps reached");
  CHECK(s0.episodes[2].outcome == Outcome::Success);
  CHECK(s1.status == "success");
  CHECK(s1.first_success_episode == 1);
  CHECK(s1.episodes.size() == 1);

  CHECK(report.success_at[1] == 0.5);
  CHECK(report.success_at[2] == 0.5);
  CHECK(report.success_at[3] == 1.0);
  CHECK(report.per_task_type.count("qa") == 1);
  CHECK(report.calls == f.total_calls);
  CHECK(report.usage.prompt_tokens > 0);

  // manifest: version, digest, scenario table.
  json manifest = json::parse(read_text_file((dir.path() / "manifest.json").string()));
  CHECK(manifest["version"] == kManifestVersion);
  CHECK(manifest["config_digest"] == harness_config_digest(f.config));
  REQUIRE(manifest["scenarios"].size() == 2);
  CHECK(manifest["scenarios"][0]["id"] == "miniwiki-000");
  CHECK(manifest["scenarios"][1]["seed"] == 1);

  // episodes.jsonl: four episodes in run order.
  std::ifstream in(episodes_file(dir), std::ios::binary);
  std::vector<Episode> episodes = episodes_from_jsonl(in);
  REQUIRE(episodes.size() == 4);
  CHECK(episodes[0].scenario_id == "miniwiki-000");
  CHECK(episodes[0].episode_index == 1);
  CHECK(episodes[2].outcome == Outcome::Success);
  CHECK(episodes[3].scenario_id == "miniwiki-001");

  // reflections.jsonl: one batch per failed non-final episode, lows first.
  std::istringstream rin(read_text_file(reflections_file(dir)));
  std::string line;
  std::vector<json> batches;
  while (std::getline(rin, line)) {
    if (!line.empty()) batches.push_back(json::parse(line));
  }
  REQUIRE(batches.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(batches[i]["scenario"] == "miniwiki-000");
    CHECK(batches[i]["episode"] == i + 1);
    REQUIRE(batches[i]["entries"].size() == 2);
    CHECK(batches[i]["entries"][0]["level"] == "low");
    CHECK(batches[i]["entries"][0].contains("goal_text"));
    CHECK(batches[i]["entries"][0]["body"].get<std::string>().rfind("Low lesson", 0) == 0);
    CHECK(batches[i]["entries"][1]["level"] == "high");
    CHECK_FALSE(batches[i]["entries"][1].contains("goal_text"));
  }

  // report.json mirrors the returned report.
  json rj = json::parse(read_text_file((dir.path() / "report.json").string()));
  CHECK(rj["success_at"]["3"] == 1.0);
  CHECK(rj["mode"] == "hmr");
}

TEST_CASE("rerunning a finished directory replays without new calls or appends") {
  WikiFixture f = make_wiki_fixture();
  TempDir dir;
  {
    ScriptedBackend backend(f.store);
    run_experiment(f.config, backend, dir.str(), tiny_library());
  }
  std::string episodes_before = read_text_file(episodes_file(dir));
  std::string reflections_before = read_text_file(reflections_file(dir));

  ScriptedBackend fresh(f.store);
  RunReport report = run_experiment(f.config, fresh, dir.str(), tiny_library());
  CHECK(report.calls == 0);
  CHECK(report.per_scenario[0].status == "success");
  CHECK(report.per_scenario[1].status == "success");
  CHECK(read_text_file(episodes_file(dir)) == episodes_before);
  CHECK(read_text_file(reflections_file(dir)) == reflections_before);
}

TEST_CASE("a run interrupted mid-scenario resumes to the byte-identical transcript") {
  WikiFixture f = make_wiki_fixture();

  TempDir full_dir;
  {
    ScriptedBackend backend(f.store);
    RunReport r = run_experiment(f.config, backend, full_dir.str(), tiny_library());
    REQUIRE_FALSE(r.interrupted);
  }
  const std::string want_episodes = read_text_file(episodes_file(full_dir));
  const std::string want_reflections = read_text_file(reflections_file(full_dir));

  struct Kill {
    const char* name;
    std::string scenario;
    int episode;
    std::string stage;
  };
  const Kill kills[] = {
      {"after episode 1 persisted, before its reflections", "miniwiki-000", 1, "episode"},
      {"after episode 1 reflections persisted", "miniwiki-000", 1, "reflections"},
      {"after episode 2 persisted", "miniwiki-000", 2, "episode"},
  };

  for (const Kill& kill : kills) {
    DYNAMIC_SECTION(kill.name) {
      TempDir dir;
      {
        ScriptedBackend backend(f.store);
        StopHook hook = [&](const std::string& scenario, int episode, const std::string& stage) {
          return scenario == kill.scenario && episode == kill.episode && stage == kill.stage;
        };
        RunReport r = run_experiment(f.config, backend, dir.str(), tiny_library(), hook);
        CHECK(r.interrupted);
        CHECK_FALSE(std::filesystem::exists(dir.path() / "report.json"));
      }
      ScriptedBackend resumed(f.store);
      RunReport r = run_experiment(f.config, resumed, dir.str(), tiny_library());
      CHECK_FALSE(r.interrupted);
      CHECK(r.per_scenario[0].status == "success");
      CHECK(r.per_scenario[1].status == "success");
      CHECK(read_text_file(episodes_file(dir)) == want_episodes);
      CHECK(read_text_file(reflections_file(dir)) == want_reflections);
      CHECK(std::filesystem::exists(dir.path() / "report.json"));
    }
  }
}

TEST_CASE("torn tail lines from a crashed append are trimmed on resume") {
  WikiFixture f = make_wiki_fixture();

  TempDir full_dir;
  {
    ScriptedBackend backend(f.store);
    run_experiment(f.config, backend, full_dir.str(), tiny_library());
  }
  const std::string want_episodes = read_text_file(episodes_file(full_dir));
  const std::string want_reflections = read_text_file(reflections_file(full_dir));

  TempDir dir;
  {
    ScriptedBackend backend(f.store);
    StopHook hook = [](const std::string& scenario, int episode, const std::string& stage) {
      return scenario == "miniwiki-000" && episode == 2 && stage == "episode";
    };
    run_experiment(f.config, backend, dir.str(), tiny_library(), hook);
  }
  // Simulate a crash mid-append on both files: half a JSON object, no newline.
  {
    std::ofstream out(episodes_file(dir), std::ios::binary | std::ios::app);
    out << "{\"index\": 99, \"tag\": \"act";
  }
  {
    std::ofstream out(reflections_file(dir), std::ios::binary | std::ios::app);
    out << "{\"scenario\": \"wiki-0";
  }

  ScriptedBackend resumed(f.store);
  RunReport r = run_experiment(f.config, resumed, dir.str(), tiny_library());
  CHECK_FALSE(r.interrupted);
  CHECK(read_text_file(episodes_file(dir)) == want_episodes);
  CHECK(read_text_file(reflections_file(dir)) == want_reflections);
}

TEST_CASE("resume refuses a directory whose config does not match") {
  WikiFixture f = make_wiki_fixture();
  TempDir dir;
  {
    ScriptedBackend backend(f.store);
    run_experiment(f.config, backend, dir.str(), tiny_library());
  }
  HarnessConfig other = f.config;
  other.episodes = 4;
  ScriptedBackend backend(f.store);
  CHECK_THROWS_AS(run_experiment(other, backend, dir.str(), tiny_library()), CorruptManifest);
}

TEST_CASE("resume refuses unreadable or foreign run directories") {
  WikiFixture f = make_wiki_fixture();

  SECTION("episodes without a manifest") {
    TempDir dir;
    write_text_file(episodes_file(dir), "{\"anything\": 1}\n");
    ScriptedBackend backend(f.store);
    CHECK_THROWS_AS(run_experiment(f.config, backend, dir.str(), tiny_library()),
                    CorruptManifest);
  }
  SECTION("manifest that is not JSON") {
    TempDir dir;
    write_text_file((dir.path() / "manifest.json").string(), "not json at all");
    ScriptedBackend backend(f.store);
    CHECK_THROWS_AS(run_experiment(f.config, backend, dir.str(), tiny_library()),
                    CorruptManifest);
  }
  SECTION("manifest from some other tool") {
    TempDir dir;
    write_text_file((dir.path() / "manifest.json").string(),
                    "{\"version\": \"other-v9\", \"config_digest\": \"x\"}\n");
    ScriptedBackend backend(f.store);
    CHECK_THROWS_AS(run_experiment(f.config, backend, dir.str(), tiny_library()),
                    CorruptManifest);
  }
}

TEST_CASE("a scenario that fails every episode is reported as failed") {
  HarnessConfig config;
  config.env_id = std::string(kMiniWikiId);
  config.episodes = 2;
  config.seeds = {0};
  config.run.max_env_steps = 2;

  ScriptedStore store;
  store.add("miniwiki-000", 1, with_reflections(failing_session(2, 1), 1));
  store.add("miniwiki-000", 2, failing_session(2, 2));  // final episode: no reflections
  ScriptedBackend backend(store);
  TempDir dir;
  RunReport report = run_experiment(config, backend, dir.str(), tiny_library());

  REQUIRE(report.per_scenario.size() == 1);
  CHECK(report.per_scenario[0].status == "failed");
  CHECK_FALSE(report.per_scenario[0].first_success_episode.has_value());
  CHECK(report.success_at[2] == 0.0);
}

TEST_CASE("an episode that aborts before any goal still lets the scenario continue") {
  HarnessConfig config;
  config.env_id = std::string(kMiniWikiId);
  config.episodes = 2;
  config.seeds = {0};
  config.run.max_env_steps = wiki_oracle_len(0);

  ScriptedStore store;
  store.add("miniwiki-000", 1, {"", "", ""});  // three unparseable goals: zero-goal failure
  store.add("miniwiki-000", 2, success_session(0));
  ScriptedBackend backend(store);
  TempDir dir;
  RunReport report = run_experiment(config, backend, dir.str(), tiny_library());

  REQUIRE(report.per_scenario.size() == 1);
  CHECK(report.per_scenario[0].status == "success");
  CHECK(report.per_scenario[0].first_success_episode == 2);
  REQUIRE(report.per_scenario[0].episodes.size() == 2);
  CHECK(report.per_scenario[0].episodes[0].outcome == Outcome::Failure);
  CHECK(report.per_scenario[0].episodes[0].goals == 0);
  // No goals means nothing to reflect on: no reflections file at all.
  CHECK_FALSE(std::filesystem::exists(reflections_file(dir)));
}

TEST_CASE("retry mode grows prompts until the budget exhausts the scenario") {
  HarnessConfig config;
  config.env_id = std::string(kMiniWikiId);
  config.episodes = 4;
  config.seeds = {0};
  config.run.mode = Mode::Retry;
  config.run.max_env_steps = 3;

  // Size the budget from the first goal prompt: episode 1 must fit with room
  // for its own short trajectory, and episode 2's pasted attempt must not.
  PromptLibrary lib = tiny_library();
  std::size_t base;
  {
    auto env = make_env(kMiniWikiId, 0);
    PromptBundle bundle;
    bundle.examples = lib.examples_for(kMiniWikiId, "qa");
    bundle.task = env->reset();
    bundle.cue = Tag::Goal;
    base = assemble_prompt(bundle, 1 << 20).size();
  }
  const std::string long_goal(600, 'g');
  const std::string short_think(100, 't');
  config.run.char_budget = static_cast<int>(base) + 1000;

  ScriptedStore store;
  store.add("miniwiki-000", 1, {long_goal, short_think, "", "", ""});  // parse-abort failure
  store.add("miniwiki-000", 2, {long_goal});  // think prompt then exceeds the budget
  ScriptedBackend backend(store);
  TempDir dir;
  RunReport report = run_experiment(config, backend, dir.str(), tiny_library());

  REQUIRE(report.per_scenario.size() == 1);
  CHECK(report.per_scenario[0].status == "exhausted");
  REQUIRE(report.per_scenario[0].episodes.size() == 2);
  CHECK(report.per_scenario[0].episodes[0].outcome == Outcome::Failure);
  CHECK(report.per_scenario[0].episodes[1].outcome == Outcome::Truncated);
  REQUIRE(report.per_scenario[0].episodes[1].abort_reason.has_value());
  CHECK(report.per_scenario[0].episodes[1].abort_reason->rfind("budget: ", 0) == 0);
  CHECK(report.success_at[4] == 0.0);
  // Retry mode persists no reflections.
  CHECK_FALSE(std::filesystem::exists(reflections_file(dir)));
}

TEST_CASE("report_from_dir rebuilds the report from persisted state") {
  WikiFixture f = make_wiki_fixture();
  TempDir dir;
  RunReport live;
  {
    ScriptedBackend backend(f.store);
    live = run_experiment(f.config, backend, dir.str(), tiny_library());
  }
  RunReport rebuilt = report_from_dir(dir.str());
  CHECK(rebuilt.env_id == live.env_id);
  CHECK(rebuilt.mode == live.mode);
  CHECK(rebuilt.episodes == live.episodes);
  CHECK(rebuilt.config_digest == live.config_digest);
  REQUIRE(rebuilt.per_scenario.size() == live.per_scenario.size());
  for (std::size_t i = 0; i < rebuilt.per_scenario.size(); ++i) {
    CHECK(rebuilt.per_scenario[i].status == live.per_scenario[i].status);
    CHECK(rebuilt.per_scenario[i].first_success_episode ==
          live.per_scenario[i].first_success_episode);
    CHECK(rebuilt.per_scenario[i].episodes.size() == live.per_scenario[i].episodes.size());
  }
  CHECK(rebuilt.success_at == live.success_at);
  CHECK(rebuilt.usage.prompt_tokens == live.usage.prompt_tokens);  // from report.json
  CHECK_FALSE(rebuilt.interrupted);

  CHECK_THROWS_AS(report_from_dir((dir.path() / "nope").string()), CorruptManifest);
}

TEST_CASE("report_from_dir marks an interrupted run and renders a table") {
  WikiFixture f = make_wiki_fixture();
  TempDir dir;
  {
    ScriptedBackend backend(f.store);
    StopHook hook = [](const std::string& scenario, int episode, const std::string& stage) {
      return scenario == "miniwiki-000" && episode == 1 && stage == "episode";
    };
    run_experiment(f.config, backend, dir.str(), tiny_library(), hook);
  }
  RunReport report = report_from_dir(dir.str());
  CHECK(report.interrupted);
  REQUIRE(report.per_scenario.size() == 2);
  CHECK(report.per_scenario[0].status == "incomplete");
  CHECK(report.per_scenario[1].status == "incomplete");

  std::string table = render_report_table(report);
  CHECK(table.find("(interrupted)") != std::string::npos);
  CHECK(table.find("success_at:") != std::string::npos);
  CHECK(table.find("incomplete=2") != std::string::npos);
}

TEST_CASE("worker count does not change results for a live backend") {
  HarnessConfig config;
  config.env_id = std::string(kMiniWikiId);
  config.episodes = 2;
  config.seeds = {0, 1, 2};
  config.run.max_env_steps = 2;

  auto live = [](const CompletionRequest& req) -> std::string {
    switch (req.role_hint) {
      case RoleHint::Goal: return "look for the answer";
      case RoleHint::Think: return "anywhere will do";
      case RoleHint::Action: return "lookup[absent]";
      case RoleHint::Finish: return "No";
      default: return "Lesson: searching beats guessing.";
    }
  };

  auto run_with_workers = [&](int workers, const TempDir& dir) {
    HarnessConfig c = config;
    c.workers = workers;
    CallbackBackend backend(live);
    return run_experiment(c, backend, dir.str(), tiny_library());
  };

  TempDir serial_dir;
  TempDir parallel_dir;
  RunReport serial = run_with_workers(1, serial_dir);
  RunReport parallel = run_with_workers(3, parallel_dir);

  REQUIRE(serial.per_scenario.size() == 3);
  REQUIRE(parallel.per_scenario.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(serial.per_scenario[i].scenario_id == parallel.per_scenario[i].scenario_id);
    CHECK(serial.per_scenario[i].status == parallel.per_scenario[i].status);
    CHECK(serial.per_scenario[i].episodes.size() == parallel.per_scenario[i].episodes.size());
  }
  CHECK(serial.success_at == parallel.success_at);
  CHECK(serial.calls == parallel.calls);
  CHECK(serial.usage.prompt_tokens == parallel.usage.prompt_tokens);

  // Same per-scenario episode records regardless of append interleaving.
  auto episodes_by_scenario = [](const TempDir& dir) {
    std::map<std::string, std::string> out;
    std::ifstream in((dir.path() / "episodes.jsonl").string(), std::ios::binary);
    for (const Episode& e : episodes_from_jsonl(in)) out[e.scenario_id] += episode_to_jsonl(e);
    return out;
  };
  CHECK(episodes_by_scenario(serial_dir) == episodes_by_scenario(parallel_dir));
}
