// Minimal end-to-end usage: build a scripted backend whose completions walk
// a MiniHouse scenario's oracle script through the tag loop, run one
// episode, and print the rendered trajectory. No network, no data files.
#include <iostream>

#include "hicrl/engine.hpp"
#include "hicrl/envs/bundled.hpp"

using namespace hicrl;

int main() {
  auto env = make_env(kMiniHouseId, 0);
  const Scenario& scenario = env->scenario();

  std::vector<std::string> completions;
  completions.push_back("complete the task: " + scenario.task_text);
  completions.push_back("I will follow the obvious plan one step at a time.");
  const std::vector<std::string> script = env->oracle_script();
  for (std::size_t i = 0; i < script.size(); ++i) {
    completions.push_back(script[i]);
    completions.push_back(i + 1 == script.size() ? "Yes" : "No");
  }

  ScriptedStore store;
  store.add(scenario.id, 1, completions);
  ScriptedBackend backend(std::move(store));
  backend.begin(scenario.id, 1);

  RunConfig config;
  LongTermMemory memory;
  Episode episode = run_episode(*env, backend, memory, {}, config, 1);

  std::cout << "scenario " << episode.scenario_id << "\n"
            << "task: " << scenario.task_text << "\n\n"
            << render_trajectory(episode.trajectory) << "\n"
            << "outcome: " << outcome_text(episode.outcome) << " reward " << episode.reward
            << "\n";
  return episode.outcome == Outcome::Success ? 0 : 1;
}
