// Command-line front end: wires flags/config files to the harness and the
// bundled environments. Kept in a header so the CLI is testable in-process
// (tests call dispatch() with argv vectors instead of spawning binaries).
//
// Exit codes: 0 success, 1 scenario-level failure (aborted scenario, failed
// oracle, missing replay target), 2 usage or configuration error.
#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hicrl/backend.hpp"
#include "hicrl/harness.hpp"
#include "hicrl/http_backend.hpp"

#ifndef HICRL_DATA_DIR
#define HICRL_DATA_DIR "data"
#endif

namespace hicrl {

inline std::string default_prompts_dir() { return std::string(HICRL_DATA_DIR) + "/prompts"; }

namespace cli_detail {

struct RunOptions {
  HarnessConfig harness;
  std::string mode_name = "hmr";
  std::string backend_name = "http";
  std::string fixture;
  std::string model;
  std::string base_url;
  std::string out_dir;
  std::string prompts_dir;
  std::string config_file;
  bool dry_run = false;
};

inline int config_int(const std::string& value, const std::string& key) {
  std::size_t pos = 0;
  int out = 0;
  try {
    out = std::stoi(value, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != value.size()) {
    throw ConfigError("config key '" + key + "' needs an integer, got '" + value + "'");
  }
  return out;
}

inline double config_double(const std::string& value, const std::string& key) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != value.size()) {
    throw ConfigError("config key '" + key + "' needs a number, got '" + value + "'");
  }
  return out;
}

inline bool config_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "' needs true or false, got '" + value + "'");
}

// Applies a plain key=value config file to the run options. A key is skipped
// when its flag was given on the command line, so precedence is flags, then
// file, then (for backend credentials) environment variables, then defaults.
// Done by hand because CLI11 only processes set_config on the root app, and
// the config belongs to the run subcommand.
inline void apply_config_file(RunOptions& opt, const CLI::App& run) {
  std::ifstream in(opt.config_file);
  if (!in) throw ConfigError("cannot open config file: " + opt.config_file);
  auto flag_given = [&run](const char* flag) { return run.count(flag) > 0; };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = trim_view(line);
    if (body.empty() || body.front() == '#') continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key(trim_view(body.substr(0, eq)));
    const std::string value(trim_view(body.substr(eq + 1)));

    if (key == "env") {
      if (!flag_given("--env")) opt.harness.env_id = value;
    } else if (key == "mode") {
      if (!flag_given("--mode")) opt.mode_name = value;
    } else if (key == "episodes") {
      if (!flag_given("--episodes")) opt.harness.episodes = config_int(value, key);
    } else if (key == "backend") {
      if (!flag_given("--backend")) opt.backend_name = value;
    } else if (key == "fixture") {
      if (!flag_given("--fixture")) opt.fixture = value;
    } else if (key == "model") {
      if (!flag_given("--model")) opt.model = value;
    } else if (key == "base-url") {
      if (!flag_given("--base-url")) opt.base_url = value;
    } else if (key == "workers") {
      if (!flag_given("--workers")) opt.harness.workers = config_int(value, key);
    } else if (key == "seed") {
      if (!flag_given("--seed")) {
        opt.harness.seeds.clear();
        std::istringstream seeds(value);
        std::string item;
        while (std::getline(seeds, item, ',')) {
          opt.harness.seeds.push_back(
              static_cast<std::uint64_t>(config_int(std::string(trim_view(item)), key)));
        }
      }
    } else if (key == "char-budget") {
      if (!flag_given("--char-budget")) opt.harness.run.char_budget = config_int(value, key);
    } else if (key == "max-steps") {
      if (!flag_given("--max-steps")) opt.harness.run.max_env_steps = config_int(value, key);
    } else if (key == "max-goals") {
      if (!flag_given("--max-goals")) opt.harness.run.max_goals = config_int(value, key);
    } else if (key == "gamma") {
      if (!flag_given("--gamma")) opt.harness.run.gamma = config_double(value, key);
    } else if (key == "memory-budget") {
      if (!flag_given("--memory-budget")) {
        opt.harness.memory_budget = static_cast<std::size_t>(config_int(value, key));
      }
    } else if (key == "include-tail") {
      if (!flag_given("--include-tail")) opt.harness.include_tail = config_bool(value, key);
    } else if (key == "prompts") {
      if (!flag_given("--prompts")) opt.prompts_dir = value;
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
}

inline std::unique_ptr<Backend> open_backend(const RunOptions& opt) {
  if (opt.backend_name == "scripted") {
    if (opt.fixture.empty()) {
      throw ConfigError("backend=scripted requires --fixture");
    }
    return std::make_unique<ScriptedBackend>(ScriptedStore::from_file(opt.fixture));
  }
  HttpBackendConfig http;
  http.base_url = opt.base_url;
  if (!opt.model.empty()) http.model = opt.model;
  return std::make_unique<HttpBackend>(http);  // AuthError here = before any request
}

// --dry-run: show the first prompt the model would see and stop.
inline int print_first_prompt(const RunOptions& opt, std::ostream& out) {
  PromptLibrary library = PromptLibrary::load(opt.prompts_dir);
  std::vector<Scenario> scenarios = harness_scenarios(opt.harness);
  if (scenarios.empty()) throw ConfigError("no scenarios to run");
  auto env = make_env(opt.harness.env_id, scenarios.front().seed);
  PromptBundle bundle;
  bundle.examples = library.examples_for(scenarios.front().env_id, scenarios.front().task_type);
  bundle.task = env->reset();
  bundle.cue = Tag::Goal;
  const RenderStyle style =
      opt.harness.run.mode == Mode::Notag ? RenderStyle::Plain : RenderStyle::Tagged;
  out << assemble_prompt(bundle, opt.harness.run.char_budget, style) << "\n";
  return 0;
}

inline int do_run(RunOptions& opt, std::ostream& out, std::ostream& err) {
  auto mode = mode_from_text(opt.mode_name);
  if (!mode) throw ConfigError("unknown mode: " + opt.mode_name);
  opt.harness.run.mode = *mode;
  if (!opt.fixture.empty()) opt.backend_name = "scripted";
  if (opt.backend_name != "http" && opt.backend_name != "scripted") {
    throw ConfigError("unknown backend: " + opt.backend_name);
  }
  validate_harness_config(opt.harness);
  if (opt.dry_run) return print_first_prompt(opt, out);

  PromptLibrary library = PromptLibrary::load(opt.prompts_dir);
  std::unique_ptr<Backend> backend = open_backend(opt);
  RunReport report = run_experiment(opt.harness, *backend, opt.out_dir, library);
  out << render_report_table(report);
  for (const ScenarioResult& s : report.per_scenario) {
    if (s.status == "aborted") {
      err << "scenario " << s.scenario_id << " aborted\n";
      return 1;
    }
  }
  return 0;
}

inline int do_report(const std::string& dir, const std::string& format, std::ostream& out) {
  RunReport report = report_from_dir(dir);
  if (format == "json") {
    out << report_to_json(report).dump(2) << "\n";
  } else {
    out << render_report_table(report);
  }
  return 0;
}

inline int do_replay(const std::string& dir, const std::string& scenario_id, int episode,
                     std::ostream& out, std::ostream& err) {
  std::ifstream in(std::filesystem::path(dir) / "episodes.jsonl", std::ios::binary);
  if (!in) throw ConfigError("no episodes.jsonl in " + dir);
  for (const Episode& e : episodes_from_jsonl(in)) {
    if (e.scenario_id != scenario_id || e.episode_index != episode) continue;
    out << "scenario " << e.scenario_id << " episode " << e.episode_index << " outcome "
        << outcome_text(e.outcome) << " reward " << e.reward;
    if (e.abort_reason) out << " (" << *e.abort_reason << ")";
    out << "\n\n" << render_trajectory(e.trajectory) << "\n";
    return 0;
  }
  err << "no persisted episode " << episode << " for " << scenario_id << " in " << dir << "\n";
  return 1;
}

inline int do_oracle(const std::string& only_env, std::ostream& out) {
  bool all_ok = true;
  for (std::string_view env_id : all_env_ids()) {
    if (!only_env.empty() && only_env != env_id) continue;
    for (std::uint64_t seed : bundled_seeds(env_id)) {
      auto env = make_env(env_id, seed);
      if (env_id == kMiniShopId) {
        auto* shop = dynamic_cast<MiniShop*>(env.get());
        if (shop && !shop_gold_satisfiable(*shop)) {
          out << "FAIL " << env->scenario().id << " gold constraints unsatisfiable\n";
          all_ok = false;
          continue;
        }
      }
      OracleOutcome res = run_oracle(*env);
      if (res.success) {
        out << "ok   " << res.scenario_id << " steps=" << res.steps << "\n";
      } else {
        out << "FAIL " << res.scenario_id << " oracle did not reach success\n";
        all_ok = false;
      }
    }
  }
  out << (all_ok ? "oracle: all scenarios solvable\n" : "oracle: FAILURES above\n");
  return all_ok ? 0 : 1;
}

}  // namespace cli_detail

inline int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"hicrl: hierarchical in-context RL agent runner"};
  app.require_subcommand(1);

  cli_detail::RunOptions opt;
  opt.prompts_dir = default_prompts_dir();

  CLI::App* run = app.add_subcommand("run", "run an experiment");
  run->add_option("--config", opt.config_file,
                  "key=value config file (command-line flags take precedence)");
  run->add_option("--env", opt.harness.env_id, "environment id")
      ->check(CLI::IsMember({"minihouse", "minishop", "miniwiki"}));
  run->add_option("--mode", opt.mode_name, "ablation mode")
      ->check(CLI::IsMember({"hmr", "reflexion", "retry", "notag"}));
  run->add_option("--episodes", opt.harness.episodes, "episodes per scenario");
  run->add_option("--backend", opt.backend_name, "completion backend")
      ->check(CLI::IsMember({"http", "scripted"}));
  run->add_option("--fixture", opt.fixture, "fixture JSONL (implies --backend scripted)");
  run->add_option("--model", opt.model, "model name for the http backend");
  run->add_option("--base-url", opt.base_url, "endpoint base URL for the http backend");
  run->add_option("--out", opt.out_dir, "run directory")->required();
  run->add_option("--workers", opt.harness.workers, "concurrent scenario workers");
  run->add_option("--seed", opt.harness.seeds, "scenario seed (repeatable; default: bundled set)");
  run->add_option("--char-budget", opt.harness.run.char_budget, "prompt character budget");
  run->add_option("--max-steps", opt.harness.run.max_env_steps,
                  "env step cap (0 = environment default)");
  run->add_option("--max-goals", opt.harness.run.max_goals, "goal proposal cap");
  run->add_option("--gamma", opt.harness.run.gamma, "terminal reward discount");
  run->add_option("--memory-budget", opt.harness.memory_budget, "reflection memory budget");
  run->add_flag("--include-tail", opt.harness.include_tail,
                "also reflect on the unfinished tail segment");
  run->add_option("--prompts", opt.prompts_dir, "few-shot prompt directory");
  run->add_flag("--dry-run", opt.dry_run, "print the first assembled prompt and exit");

  std::string report_dir, report_format = "text";
  CLI::App* report = app.add_subcommand("report", "print metrics for a run directory");
  report->add_option("dir", report_dir, "run directory")->required();
  report->add_option("--format", report_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  std::string replay_dir, replay_scenario;
  int replay_episode = 1;
  CLI::App* replay = app.add_subcommand("replay", "re-render a persisted episode");
  replay->add_option("dir", replay_dir, "run directory")->required();
  replay->add_option("--scenario", replay_scenario, "scenario id")->required();
  replay->add_option("--episode", replay_episode, "episode index (1-based)");

  std::string oracle_env;
  CLI::App* oracle = app.add_subcommand("oracle", "verify bundled scenarios are solvable");
  oracle->add_option("--env", oracle_env, "restrict to one environment")
      ->check(CLI::IsMember({"minihouse", "minishop", "miniwiki"}));

  // CLI11 wants mutable argc/argv-style input; it parses right-to-left.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed()) {
      if (!opt.config_file.empty()) cli_detail::apply_config_file(opt, *run);
      return cli_detail::do_run(opt, out, err);
    }
    if (report->parsed()) return cli_detail::do_report(report_dir, report_format, out);
    if (replay->parsed()) {
      return cli_detail::do_replay(replay_dir, replay_scenario, replay_episode, out, err);
    }
    if (oracle->parsed()) return cli_detail::do_oracle(oracle_env, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CorruptManifest& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownEnv& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const BadSeed& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const AuthError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

inline int dispatch_argv(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args);
}

}  // namespace hicrl
