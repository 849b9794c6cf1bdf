// Regenerates the checked-in data files that derive from the bundled
// scenario tables:
//
//   data/packs/<scenario-id>.json   one pack per bundled scenario
//   data/fixtures/demo_minihouse.jsonl   scripted completions that solve
//                                        minihouse seeds 0-5 on episode 1
//
// Run from the repository root (or pass the output root as argv[1]). A test
// compares these files against freshly generated ones so scenario-table
// drift is caught at review time.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hicrl/backend.hpp"
#include "hicrl/envs/bundled.hpp"

namespace fs = std::filesystem;
using namespace hicrl;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

// Episode-1 fixture that walks the oracle script inside the tag loop: one
// goal, one think, then action/finish pairs with Yes on the last action.
std::string demo_fixture_lines(Environment& env) {
  const Scenario& s = env.scenario();
  std::vector<std::string> texts;
  texts.push_back("complete the task: " + s.task_text);
  texts.push_back("I will follow the obvious plan one step at a time.");
  const std::vector<std::string> script = env.oracle_script();
  for (std::size_t i = 0; i < script.size(); ++i) {
    texts.push_back(script[i]);
    texts.push_back(i + 1 == script.size() ? "Yes" : "No");
  }
  std::string out;
  for (std::size_t seq = 0; seq < texts.size(); ++seq) {
    FixtureLine line{s.id, 1, static_cast<int>(seq), texts[seq]};
    out += fixture_line_to_json(line).dump();
    out += '\n';
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path(".");
  const fs::path packs = root / "data" / "packs";
  const fs::path fixtures = root / "data" / "fixtures";
  fs::create_directories(packs);
  fs::create_directories(fixtures);

  int written = 0;
  for (const std::string& env_id : all_env_ids()) {
    for (std::uint64_t seed : bundled_seeds(env_id)) {
      auto env = make_env(env_id, seed);
      write_file(packs / (env->scenario().id + ".json"),
                 scenario_pack(*env).dump(2) + "\n");
      ++written;
    }
  }

  std::string fixture;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto env = make_env(kMiniHouseId, seed);
    fixture += demo_fixture_lines(*env);
  }
  write_file(fixtures / "demo_minihouse.jsonl", fixture);

  std::cout << "wrote " << written << " packs and data/fixtures/demo_minihouse.jsonl under "
            << root.string() << "\n";
  return 0;
}
