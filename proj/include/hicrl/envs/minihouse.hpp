// MiniHouse: a deterministic household environment with six task types
// (put, clean, heat, cool, examine, puttwo). The agent moves between fixed
// receptacles, carries one object at a time, and processes objects with the
// microwave, fridge, or sinkbasin.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hicrl/envs/env.hpp"

namespace hicrl {

inline const std::vector<std::string>& house_task_types() {
  static const std::vector<std::string> kTypes = {"put",  "clean",   "heat",
                                                  "cool", "examine", "puttwo"};
  return kTypes;
}

class MiniHouse : public Environment {
 public:
  struct Recep {
    std::string name;
    bool openable;
    bool open;
    const char* prep;  // "in" or "on"
  };
  struct Obj {
    std::string name;  // "mug 1"
    std::string type;  // "mug"
    std::string loc;   // receptacle name, or "hand"
    bool clean = false, hot = false, cold = false;
  };

  explicit MiniHouse(std::uint64_t seed) { generate(seed); }

  const Scenario& scenario() const override { return scenario_; }

  std::string reset() override {
    generate(scenario_.seed);
    was_reset_ = true;
    done_ = false;
    std::string banner = "You are in the middle of a room. Looking quickly around you, you see";
    for (std::size_t i = 0; i < receps_.size(); ++i) {
      banner += i == 0 ? " " : (i + 1 == receps_.size() ? ", and " : ", ");
      banner += "a " + receps_[i].name;
    }
    banner += ".\nYour task is to: " + scenario_.task_text;
    return banner;
  }

  StepResult step(const std::string& action) override {
    require_live();
    const std::string a = normalize_action(action);
    std::string obs = apply(a);
    StepResult result;
    result.observation = std::move(obs);
    if (task_solved()) {
      done_ = true;
      result.done = true;
      result.reward = 1.0;
    }
    return result;
  }

  std::vector<std::string> oracle_script() const override { return oracle_; }

  json world_spec() const override {
    json receps = json::array();
    for (const Recep& r : receps_) {
      receps.push_back({{"name", r.name}, {"openable", r.openable}, {"prep", r.prep}});
    }
    json objects = json::array();
    for (const Obj& o : initial_objects_) {
      objects.push_back({{"name", o.name}, {"type", o.type}, {"loc", o.loc}});
    }
    return json{{"receptacles", receps}, {"objects", objects}};
  }

  std::string state_digest() const override {
    std::string s = agent_loc_ + "|" + holding_ + "|" + (done_ ? "1" : "0") +
                    (lamp_on_ ? "L" : "l");
    for (const Recep& r : receps_) s += r.open ? "o" : "c";
    for (const Obj& o : objects_) {
      s += "|" + o.name + "@" + o.loc + (o.clean ? "C" : "") + (o.hot ? "H" : "") +
           (o.cold ? "K" : "");
    }
    return hex_digest(s);
  }

 private:
  // --- world generation ---

  void generate(std::uint64_t seed) {
    SplitMix64 rng(seed ^ fnv1a64(kMiniHouseId));
    receps_ = {
        {"cabinet 1", true, false, "in"},  {"cabinet 2", true, false, "in"},
        {"cabinet 3", true, false, "in"},  {"cabinet 4", true, false, "in"},
        {"countertop 1", false, true, "on"}, {"countertop 2", false, true, "on"},
        {"desk 1", false, true, "on"},     {"drawer 1", true, false, "in"},
        {"drawer 2", true, false, "in"},   {"fridge 1", true, false, "in"},
        {"garbagecan 1", false, true, "in"}, {"microwave 1", true, false, "in"},
        {"shelf 1", false, true, "on"},    {"shelf 2", false, true, "on"},
        {"sinkbasin 1", false, true, "on"},
    };
    objects_.clear();
    agent_loc_.clear();
    holding_.clear();
    lamp_on_ = false;

    scenario_.env_id = std::string(kMiniHouseId);
    scenario_.seed = seed;
    scenario_.id = scenario_id(kMiniHouseId, seed);
    scenario_.task_type = house_task_types()[seed % house_task_types().size()];

    static const std::vector<std::string> kPutPool = {"mug", "plate", "book", "pen",
                                                      "bowl", "cup", "watch", "keychain"};
    static const std::vector<std::string> kCleanPool = {"plate", "cup", "bowl",
                                                        "knife", "spoon", "pan"};
    static const std::vector<std::string> kHeatPool = {"apple", "bread", "potato", "egg",
                                                       "tomato"};
    static const std::vector<std::string> kCoolPool = {"mug", "apple", "tomato", "potato",
                                                       "cup"};
    static const std::vector<std::string> kExaminePool = {"book", "pen", "creditcard",
                                                          "cellphone", "watch", "keychain"};
    static const std::vector<std::string> kTwoPool = {"apple", "egg", "cup",
                                                      "spoon", "pen", "book"};
    static const std::vector<std::string> kAllTypes = {
        "mug", "apple", "bread", "tomato", "potato", "egg", "plate", "cup", "knife",
        "spoon", "book", "pen", "keychain", "creditcard", "cellphone", "watch", "bowl", "pan"};
    // Receptacles that can be named as a task target (tools and trash excluded).
    static const std::vector<std::string> kTargets = {
        "cabinet 1", "cabinet 2", "cabinet 3", "cabinet 4", "countertop 1",
        "countertop 2", "desk 1", "drawer 1", "drawer 2", "shelf 1", "shelf 2"};

    const std::string& type = scenario_.task_type;
    const std::vector<std::string>& pool =
        type == "put" ? kPutPool : type == "clean" ? kCleanPool : type == "heat" ? kHeatPool
        : type == "cool" ? kCoolPool : type == "examine" ? kExaminePool : kTwoPool;
    target_type_ = pool[rng.below(pool.size())];
    target_recep_ = type == "examine" ? "desk 1" : kTargets[rng.below(kTargets.size())];

    auto random_recep = [&](const std::string& avoid1, const std::string& avoid2) {
      for (;;) {
        const std::string& r = receps_[rng.below(receps_.size())].name;
        if (r != avoid1 && r != avoid2) return r;
      }
    };

    // Target instance(s) first so they are always numbered from 1.
    const std::string avoid = type == "examine" ? "" : target_recep_;
    place(target_type_, random_recep(avoid, ""));
    if (type == "puttwo") {
      place(target_type_, random_recep(avoid, objects_.back().loc));
    }
    // The desklamp is furniture: present in every world, never takeable.
    objects_.push_back({"desklamp 1", "desklamp", "desk 1"});

    int distractors = 4 + static_cast<int>(rng.below(3));
    for (int i = 0; i < distractors; ++i) {
      place(kAllTypes[rng.below(kAllTypes.size())], receps_[rng.below(receps_.size())].name);
    }
    initial_objects_ = objects_;

    scenario_.task_text = task_text();
    scenario_.gold = json{{"task_type", type},
                          {"object_type", target_type_},
                          {"receptacle", type == "examine" ? "desklamp 1" : target_recep_}};
    build_oracle();
  }

  void place(const std::string& type, const std::string& loc) {
    int n = 1;
    for (const Obj& o : objects_) {
      if (o.type == type) ++n;
    }
    objects_.push_back({type + " " + std::to_string(n), type, loc});
  }

  std::string task_text() const {
    const Recep* target = find_recep(target_recep_);
    const std::string& t = scenario_.task_type;
    if (t == "put") return "put a " + target_type_ + " " + target->prep + " " + target_recep_ + ".";
    if (t == "clean")
      return "put a clean " + target_type_ + " " + target->prep + " " + target_recep_ + ".";
    if (t == "heat")
      return "put a hot " + target_type_ + " " + target->prep + " " + target_recep_ + ".";
    if (t == "cool")
      return "put a cool " + target_type_ + " " + target->prep + " " + target_recep_ + ".";
    if (t == "examine") return "look at the " + target_type_ + " under the desklamp.";
    return "put two " + target_type_ + "s " + target->prep + " " + target_recep_ + ".";
  }

  // --- action handling ---

  const Recep* find_recep(const std::string& name) const {
    for (const Recep& r : receps_) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }
  Recep* find_recep(const std::string& name) {
    return const_cast<Recep*>(static_cast<const MiniHouse*>(this)->find_recep(name));
  }
  Obj* find_obj(const std::string& name) {
    for (Obj& o : objects_) {
      if (o.name == name) return &o;
    }
    return nullptr;
  }

  std::string contents_sentence(const Recep& r) const {
    std::vector<std::string> names;
    for (const Obj& o : objects_) {
      if (o.loc == r.name) names.push_back(o.name);
    }
    std::string out = std::string(r.prep == std::string("in") ? "In" : "On") + " the " + r.name +
                      ", you see ";
    if (names.empty()) return out + "nothing.";
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i > 0) out += i + 1 == names.size() ? ", and " : ", ";
      out += "a " + names[i];
    }
    return out + ".";
  }

  bool reachable(const Recep& r) const { return !r.openable || r.open; }

  std::string apply(const std::string& a) {
    auto nothing = [] { return std::string(kNothingHappens); };

    if (a.rfind("go to ", 0) == 0) {
      const Recep* r = find_recep(a.substr(6));
      if (!r || agent_loc_ == r->name) return nothing();
      agent_loc_ = r->name;
      if (!reachable(*r)) return "The " + r->name + " is closed.";
      return "You arrive at the " + r->name + ". " + contents_sentence(*r);
    }
    if (a.rfind("open ", 0) == 0) {
      Recep* r = find_recep(a.substr(5));
      if (!r || agent_loc_ != r->name || !r->openable || r->open) return nothing();
      r->open = true;
      return "You open the " + r->name + ". " + contents_sentence(*r);
    }
    if (a.rfind("close ", 0) == 0) {
      Recep* r = find_recep(a.substr(6));
      if (!r || agent_loc_ != r->name || !r->openable || !r->open) return nothing();
      r->open = false;
      return "You close the " + r->name + ".";
    }
    if (a.rfind("take ", 0) == 0) {
      std::size_t sep = a.find(" from ");
      if (sep == std::string::npos) return nothing();
      Obj* o = find_obj(a.substr(5, sep - 5));
      const Recep* r = find_recep(a.substr(sep + 6));
      if (!o || !r || o->loc != r->name || agent_loc_ != r->name || !reachable(*r) ||
          !holding_.empty() || o->type == "desklamp") {
        return nothing();
      }
      o->loc = "hand";
      holding_ = o->name;
      return "You take the " + o->name + " from the " + r->name + ".";
    }
    if (a.rfind("put ", 0) == 0) {
      std::size_t sep = a.find(" in/on ");
      std::size_t skip = 7;
      if (sep == std::string::npos) {
        sep = a.find(" in ");
        skip = 4;
      }
      if (sep == std::string::npos) {
        sep = a.find(" on ");
        skip = 4;
      }
      if (sep == std::string::npos) return nothing();
      Obj* o = find_obj(a.substr(4, sep - 4));
      Recep* r = find_recep(a.substr(sep + skip));
      if (!o || !r || holding_ != o->name || agent_loc_ != r->name || !reachable(*r)) {
        return nothing();
      }
      o->loc = r->name;
      holding_.clear();
      return "You put the " + o->name + " " + r->prep + " the " + r->name + ".";
    }
    if (a.rfind("heat ", 0) == 0) return process(a, "heat", "microwave 1");
    if (a.rfind("cool ", 0) == 0) return process(a, "cool", "fridge 1");
    if (a.rfind("clean ", 0) == 0) return process(a, "clean", "sinkbasin 1");
    if (a.rfind("use ", 0) == 0) {
      std::string what = a.substr(4);
      if (what == "desklamp") what = "desklamp 1";
      if (what != "desklamp 1" || agent_loc_ != "desk 1") return nothing();
      lamp_on_ = true;
      return "You turn on the desklamp 1.";
    }
    if (a.rfind("examine ", 0) == 0) {
      std::string what = a.substr(8);
      if (const Recep* r = find_recep(what)) {
        if (agent_loc_ != r->name || !reachable(*r)) return nothing();
        return contents_sentence(*r);
      }
      Obj* o = find_obj(what);
      if (!o) return nothing();
      const Recep* at = find_recep(o->loc);
      bool visible = holding_ == o->name || (at && at->name == agent_loc_ && reachable(*at));
      if (!visible) return nothing();
      return "You see nothing special about the " + o->name + ".";
    }
    return nothing();
  }

  std::string process(const std::string& a, const std::string& verb, const std::string& tool) {
    std::size_t sep = a.find(" with ");
    if (sep == std::string::npos) return std::string(kNothingHappens);
    Obj* o = find_obj(a.substr(verb.size() + 1, sep - verb.size() - 1));
    std::string named_tool = a.substr(sep + 6);
    if (named_tool + " 1" == tool) named_tool = tool;  // "with fridge" also accepted
    if (!o || named_tool != tool || holding_ != o->name || agent_loc_ != tool) {
      return std::string(kNothingHappens);
    }
    if (verb == "heat") {
      o->hot = true;
      o->cold = false;
    } else if (verb == "cool") {
      o->cold = true;
      o->hot = false;
    } else {
      o->clean = true;
    }
    return "You " + verb + " the " + o->name + " using the " + tool + ".";
  }

  bool task_solved() const {
    const std::string& t = scenario_.task_type;
    if (t == "examine") {
      if (!lamp_on_ || agent_loc_ != "desk 1") return false;
      for (const Obj& o : objects_) {
        if (o.type == target_type_ && o.name == holding_) return true;
      }
      return false;
    }
    int at_target = 0;
    for (const Obj& o : objects_) {
      if (o.type != target_type_ || o.loc != target_recep_) continue;
      if (t == "clean" && !o.clean) continue;
      if (t == "heat" && !o.hot) continue;
      if (t == "cool" && !o.cold) continue;
      ++at_target;
    }
    return t == "puttwo" ? at_target >= 2 : at_target >= 1;
  }

  // --- oracle ---

  void build_oracle() {
    oracle_.clear();
    std::string at;  // mirrors agent position while scripting
    std::vector<std::string> opened;
    auto go = [&](const std::string& r) {
      if (at == r) return;
      oracle_.push_back("go to " + r);
      at = r;
      const Recep* rec = find_recep(r);
      if (rec->openable && std::find(opened.begin(), opened.end(), r) == opened.end()) {
        oracle_.push_back("open " + r);
        opened.push_back(r);
      }
    };
    auto fetch = [&](const Obj& o) {
      go(o.loc);
      oracle_.push_back("take " + o.name + " from " + o.loc);
    };
    auto stow = [&](const Obj& o) {
      go(target_recep_);
      oracle_.push_back("put " + o.name + " " + find_recep(target_recep_)->prep + " " +
                        target_recep_);
    };

    const std::string& t = scenario_.task_type;
    const Obj& first = objects_[0];
    if (t == "put") {
      fetch(first);
      stow(first);
    } else if (t == "clean" || t == "heat" || t == "cool") {
      const std::string tool = t == "clean" ? "sinkbasin 1" : t == "heat" ? "microwave 1"
                                                                          : "fridge 1";
      fetch(first);
      go(tool);
      oracle_.push_back(t + " " + first.name + " with " + tool);
      stow(first);
    } else if (t == "examine") {
      fetch(first);
      go("desk 1");
      oracle_.push_back("use desklamp 1");
    } else {  // puttwo
      fetch(first);
      stow(first);
      const Obj& second = objects_[1];
      fetch(second);
      stow(second);
    }
  }

  Scenario scenario_;
  std::vector<Recep> receps_;
  std::vector<Obj> objects_;
  std::vector<Obj> initial_objects_;
  std::string agent_loc_;
  std::string holding_;
  std::string target_type_;
  std::string target_recep_;
  bool lamp_on_ = false;
  std::vector<std::string> oracle_;
};

}  // namespace hicrl
