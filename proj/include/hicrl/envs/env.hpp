// Common interface for the three bundled text environments. Worlds are pure
// functions of (env_id, seed); episodes interact only through reset/step.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hicrl/core.hpp"
#include "hicrl/util.hpp"

namespace hicrl {

inline constexpr std::string_view kMiniHouseId = "minihouse";
inline constexpr std::string_view kMiniShopId = "minishop";
inline constexpr std::string_view kMiniWikiId = "miniwiki";

// Step caps sized as generous multiples of the bundled oracle lengths.
inline int default_step_cap(std::string_view env_id) {
  if (env_id == kMiniHouseId) return 40;
  if (env_id == kMiniShopId) return 15;
  if (env_id == kMiniWikiId) return 12;
  throw UnknownEnv("no step cap for env '" + std::string(env_id) + "'");
}

struct Scenario {
  std::string env_id;
  std::uint64_t seed = 0;
  std::string id;         // "<env_id>-<seed, zero padded>"
  std::string task_type;  // house: put/clean/heat/cool/examine/puttwo; else shop/qa
  std::string task_text;
  json gold;              // hidden success specification
};

inline std::string scenario_id(std::string_view env_id, std::uint64_t seed) {
  std::string n = std::to_string(seed);
  while (n.size() < 3) n.insert(n.begin(), '0');
  return std::string(env_id) + "-" + n;
}

struct StepResult {
  std::string observation;
  double reward = 0.0;
  bool done = false;
};

inline constexpr std::string_view kNothingHappens = "Nothing happens.";

// Lowercases, trims, and collapses whitespace runs so that models get a bit
// of slack in how they format an action string.
inline std::string normalize_action(std::string_view action) {
  std::string out;
  bool pending_space = false;
  for (char c : trim_view(action)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

class Environment {
 public:
  virtual ~Environment() = default;
  virtual const Scenario& scenario() const = 0;

  // Rebuilds the world deterministically and returns the initial observation
  // (always contains the task text).
  virtual std::string reset() = 0;

  // Applies one action. Unrecognized or inapplicable actions observe
  // "Nothing happens." and leave the state untouched.
  virtual StepResult step(const std::string& action) = 0;

  // Action sequence that reaches success from reset; used by `cli oracle`
  // and the solvability tests.
  virtual std::vector<std::string> oracle_script() const = 0;

  // Full world spec for scenario packs.
  virtual json world_spec() const = 0;

  // Digest over the complete mutable state; lets tests check that rejected
  // actions leave the world bit-identical.
  virtual std::string state_digest() const = 0;

 protected:
  void require_live() const {
    if (!was_reset_) throw NotReset("environment used before reset()");
    if (done_) throw AlreadyDone("environment stepped after terminal state");
  }
  bool was_reset_ = false;
  bool done_ = false;
};

// make_env(env_id, seed) lives in envs/bundled.hpp with the scenario tables.

}  // namespace hicrl
