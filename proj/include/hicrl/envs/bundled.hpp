// Bundled scenario tables for the three environments, the factory, the
// oracle-script runner used by `cli oracle` and the solvability tests, and
// scenario pack serialization.
#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "hicrl/envs/env.hpp"
#include "hicrl/envs/minihouse.hpp"
#include "hicrl/envs/minishop.hpp"
#include "hicrl/envs/miniwiki.hpp"

namespace hicrl {

inline std::unique_ptr<Environment> make_env(std::string_view env_id, std::uint64_t seed) {
  if (env_id == kMiniHouseId) return std::make_unique<MiniHouse>(seed);
  if (env_id == kMiniShopId) return std::make_unique<MiniShop>(seed);
  if (env_id == kMiniWikiId) return std::make_unique<MiniWiki>(seed);
  throw UnknownEnv("unknown environment '" + std::string(env_id) + "'");
}

inline const std::vector<std::string>& all_env_ids() {
  static const std::vector<std::string> kIds = {std::string(kMiniHouseId),
                                                std::string(kMiniShopId),
                                                std::string(kMiniWikiId)};
  return kIds;
}

// 24 house scenarios (4 per task type), 20 shop, 20 wiki.
inline std::vector<std::uint64_t> bundled_seeds(std::string_view env_id) {
  std::size_t n;
  if (env_id == kMiniHouseId) {
    n = 24;
  } else if (env_id == kMiniShopId || env_id == kMiniWikiId) {
    n = 20;
  } else {
    throw UnknownEnv("unknown environment '" + std::string(env_id) + "'");
  }
  std::vector<std::uint64_t> seeds(n);
  std::iota(seeds.begin(), seeds.end(), 0);
  return seeds;
}

struct OracleOutcome {
  std::string scenario_id;
  bool success = false;
  int steps = 0;
};

// Replays the environment's own oracle script and reports whether it reaches
// success within the step cap.
inline OracleOutcome run_oracle(Environment& env) {
  OracleOutcome out;
  out.scenario_id = env.scenario().id;
  env.reset();
  const int cap = default_step_cap(env.scenario().env_id);
  for (const std::string& action : env.oracle_script()) {
    if (out.steps >= cap) return out;
    StepResult r = env.step(action);
    ++out.steps;
    if (r.done) {
      out.success = r.reward >= 1.0;
      return out;
    }
  }
  return out;
}

// Exhaustive catalog scan: is there any item satisfying every gold
// constraint? Independent of the search/click path.
inline bool shop_gold_satisfiable(const MiniShop& shop) {
  for (const ShopItem& item : shop_catalog()) {
    if (shop.gold().satisfied_by(item)) return true;
  }
  return false;
}

inline constexpr std::string_view kPackSchema = "hicrl-pack-v1";

// Self-contained scenario description: world spec, gold spec, oracle script.
// Documented in the README so user-authored packs can mirror it.
inline json scenario_pack(Environment& env) {
  const Scenario& s = env.scenario();
  return json{{"schema", kPackSchema},
              {"env", s.env_id},
              {"seed", s.seed},
              {"id", s.id},
              {"task_type", s.task_type},
              {"task", s.task_text},
              {"gold", s.gold},
              {"world", env.world_spec()},
              {"oracle", env.oracle_script()}};
}

}  // namespace hicrl
