// Loads the few-shot example trajectories and reflection exemplars that ship
// in data/prompts. Files are plain text; the name encodes what they are:
//
//   house_<tasktype>_N.txt  solved MiniHouse trajectory for that task type
//   shop_N.txt              solved MiniShop trajectory
//   wiki_N.txt              solved MiniWiki trajectory
//   reflect_low_N.txt       worked example of a sub-goal reflection
//   reflect_high_N.txt      worked example of a goal-sequence reflection
//
// Example trajectories are validated on load: every tagged line must parse
// and the step sequence must satisfy the tag grammar, so a typo in a data
// file fails fast instead of silently degrading prompts.
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hicrl/core.hpp"
#include "hicrl/envs/bundled.hpp"
#include "hicrl/hmr.hpp"
#include "hicrl/promptkit.hpp"

namespace hicrl {

struct PromptLibrary {
  std::vector<FewShotExample> examples;
  std::vector<std::string> low_exemplars;
  std::vector<std::string> high_exemplars;

  // House examples match on task type; shop and wiki have a single task type
  // each, so any example for the environment qualifies.
  std::vector<FewShotExample> examples_for(std::string_view env_id,
                                           std::string_view task_type) const {
    std::vector<FewShotExample> out;
    for (const FewShotExample& ex : examples) {
      if (ex.env_id != env_id) continue;
      if (env_id == kMiniHouseId && ex.task_type != task_type) continue;
      out.push_back(ex);
    }
    return out;
  }

  ReflectionExemplars exemplars() const { return {low_exemplars, high_exemplars}; }

  static PromptLibrary load(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError("prompt directory not found: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());  // directory order is not deterministic

    PromptLibrary lib;
    for (const fs::path& path : files) {
      const std::string name = path.stem().string();
      const std::string body = read_text(path);
      if (body.empty()) throw ConfigError("empty prompt file: " + path.string());
      if (name.rfind("reflect_low_", 0) == 0) {
        lib.low_exemplars.push_back(body);
      } else if (name.rfind("reflect_high_", 0) == 0) {
        lib.high_exemplars.push_back(body);
      } else if (name.rfind("house_", 0) == 0) {
        const std::string rest = name.substr(6);
        const std::size_t us = rest.rfind('_');
        if (us == std::string::npos) throw ConfigError("bad prompt file name: " + path.string());
        lib.add_example(kMiniHouseId, rest.substr(0, us), body, path.string());
      } else if (name.rfind("shop_", 0) == 0) {
        lib.add_example(kMiniShopId, "shop", body, path.string());
      } else if (name.rfind("wiki_", 0) == 0) {
        lib.add_example(kMiniWikiId, "qa", body, path.string());
      } else {
        throw ConfigError("unrecognized prompt file: " + path.string());
      }
    }
    lib.check_complete(dir);
    return lib;
  }

 private:
  static std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read prompt file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string body = buf.str();
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
    return body;
  }

  void add_example(std::string_view env_id, std::string_view task_type, const std::string& body,
                   const std::string& origin) {
    ParsedTrajectoryText parsed = parse_trajectory_text(body);
    if (parsed.steps.empty()) {
      throw ConfigError("prompt file has no tagged steps: " + origin);
    }
    Trajectory t = trajectory_from_steps(parsed.steps);
    if (!matches_tag_grammar(t)) {
      throw ConfigError("example trajectory violates the tag grammar: " + origin);
    }
    examples.push_back(FewShotExample{std::string(env_id), std::string(task_type), body});
  }

  void check_complete(const std::string& dir) const {
    if (low_exemplars.empty()) throw ConfigError("no reflect_low exemplars in " + dir);
    if (high_exemplars.empty()) throw ConfigError("no reflect_high exemplars in " + dir);
    for (const std::string& type : house_task_types()) {
      if (examples_for(kMiniHouseId, type).empty()) {
        throw ConfigError("no house example for task type '" + type + "' in " + dir);
      }
    }
    if (examples_for(kMiniShopId, "shop").empty()) throw ConfigError("no shop example in " + dir);
    if (examples_for(kMiniWikiId, "qa").empty()) throw ConfigError("no wiki example in " + dir);
  }
};

}  // namespace hicrl
