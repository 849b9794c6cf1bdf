#include <catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "hicrl/core.hpp"
#include "hicrl/promptkit.hpp"
#include "hicrl/util.hpp"
#include "support/test_util.hpp"

using namespace hicrl;
using hicrl::test::random_valid_trajectory;
using hicrl::test::RandomTrajectoryOptions;

namespace {

Step tagged(int index, Tag tag, std::string content,
            std::optional<std::string> obs = std::nullopt) {
  return make_step(index, tag, std::move(content), std::move(obs));
}

// Two finished segments plus an open third goal; the shape behind the
// truncation and locality cases below.
Trajectory three_goal_trajectory() {
  Trajectory t;
  t.steps = {
      tagged(0, Tag::Goal, "g-one"),
      tagged(1, Tag::Think, "t-one"),
      tagged(2, Tag::Action, "a-one", "o-one"),
      tagged(3, Tag::Finish, "Yes"),
      tagged(4, Tag::Goal, "g-two"),
      tagged(5, Tag::Think, "t-two"),
      tagged(6, Tag::Action, "a-two", "o-two"),
      tagged(7, Tag::Finish, "Yes"),
      tagged(8, Tag::Goal, "g-three"),
      tagged(9, Tag::Think, "t-three"),
  };
  t.goals = {
      Goal{0, "g-one", GoalStatus::Finished, 0},
      Goal{1, "g-two", GoalStatus::Finished, 4},
      Goal{2, "g-three", GoalStatus::Active, 8},
  };
  return t;
}

bool contains(const std::string& haystack, std::string_view needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("render_step emits the tag line plus an observation line") {
  Step action = tagged(0, Tag::Action, "go to countertop 1", "On the countertop 1, you see a mug 2.");
  CHECK(render_step(action) ==
        "[Action] go to countertop 1\nObservation: On the countertop 1, you see a mug 2.");
  CHECK(render_step(action, RenderStyle::Plain) ==
        "action: go to countertop 1\nObservation: On the countertop 1, you see a mug 2.");

  Step goal = tagged(1, Tag::Goal, "find a mug");
  CHECK(render_step(goal) == "[Goal] find a mug");
  CHECK(render_step(goal, RenderStyle::Plain) == "goal: find a mug");
}

TEST_CASE("render_steps clamps its range and joins with single newlines") {
  Trajectory t = three_goal_trajectory();
  CHECK(render_steps(t.steps, 8, 99) == "[Goal] g-three\n[Think] t-three");
  CHECK(render_steps(t.steps, 5, 5).empty());
  CHECK(render_trajectory(t) == render_steps(t.steps, 0, t.steps.size()));
}

TEST_CASE("finish_yes_boundaries marks the step after each Yes") {
  Trajectory t = three_goal_trajectory();
  CHECK(finish_yes_boundaries(t) == std::vector<std::size_t>{4, 8});
  CHECK(active_segment_begin(t) == 8);

  Trajectory fresh;
  fresh.steps = {tagged(0, Tag::Goal, "g"), tagged(1, Tag::Think, "t")};
  fresh.goals = {Goal{0, "g", GoalStatus::Active, 0}};
  CHECK(finish_yes_boundaries(fresh).empty());
  CHECK(active_segment_begin(fresh) == 0);
}

TEST_CASE("rendering then re-parsing recovers the tag/content/observation sequence") {
  SplitMix64 rng(0x9e3779b97f4a7c15ull);
  for (int iter = 0; iter < 200; ++iter) {
    Trajectory t = random_valid_trajectory(rng);
    for (RenderStyle style : {RenderStyle::Tagged, RenderStyle::Plain}) {
      std::string text = render_trajectory(t, style);
      if (style == RenderStyle::Plain) continue;  // plain text parses via parse_plain_step
      ParsedTrajectoryText parsed = parse_trajectory_text(text);
      REQUIRE(parsed.preamble.empty());
      REQUIRE(parsed.steps.size() == t.steps.size());
      for (std::size_t i = 0; i < t.steps.size(); ++i) {
        CHECK(parsed.steps[i].tag == t.steps[i].tag);
        CHECK(parsed.steps[i].content == t.steps[i].content);
        CHECK(parsed.steps[i].observation == t.steps[i].observation);
      }
    }
  }
}

TEST_CASE("parse_trajectory_text keeps preamble, attaches observations, joins continuations") {
  std::string text =
      "You are in a kitchen.\n"
      "Your task is to: put a mug on the shelf.\n"
      "\n"
      "[Goal] find a mug\n"
      "[Think] the mug is probably\n"
      "on the countertop\n"
      "[Action] go to countertop 1\n"
      "observation: On the countertop 1, you see\n"
      "a mug 2 and a plate 1.\n"
      "[Finish] No\n";
  ParsedTrajectoryText parsed = parse_trajectory_text(text);
  REQUIRE(parsed.preamble.size() == 2);
  CHECK(parsed.preamble[0] == "You are in a kitchen.");
  CHECK(parsed.preamble[1] == "Your task is to: put a mug on the shelf.");
  REQUIRE(parsed.steps.size() == 4);
  CHECK(parsed.steps[1].content == "the mug is probably\non the countertop");
  REQUIRE(parsed.steps[2].observation.has_value());
  CHECK(*parsed.steps[2].observation == "On the countertop 1, you see\na mug 2 and a plate 1.");
  CHECK(parsed.steps[3].tag == Tag::Finish);
  CHECK(parsed.steps[3].content == "No");
}

TEST_CASE("multi-line observations survive a render/parse round trip") {
  Trajectory t;
  t.steps = {
      tagged(0, Tag::Goal, "look things up"),
      tagged(1, Tag::Think, "search first"),
      tagged(2, Tag::Action, "lookup[river]", "line one of the page.\nline two of the page."),
      tagged(3, Tag::Finish, "Yes"),
  };
  t.goals = {Goal{0, "look things up", GoalStatus::Finished, 0}};
  ParsedTrajectoryText parsed = parse_trajectory_text(render_trajectory(t));
  REQUIRE(parsed.steps.size() == 4);
  CHECK(*parsed.steps[2].observation == "line one of the page.\nline two of the page.");
}

TEST_CASE("strip_tag_echo removes repeated tag prefixes and is idempotent") {
  CHECK(strip_tag_echo("[Goal] find a mug") == " find a mug");
  CHECK(strip_tag_echo("[Goal]: find a mug") == " find a mug");
  CHECK(strip_tag_echo("[Goal] [Goal] find a mug") == " find a mug");
  CHECK(strip_tag_echo("  [Action][Think] look around") == " look around");
  CHECK(strip_tag_echo("plain text") == "plain text");
  CHECK(strip_tag_echo("[weird] bracket") == "[weird] bracket");
  std::string once(strip_tag_echo("[Finish] [Finish]: Yes"));
  CHECK(std::string(strip_tag_echo(once)) == once);
}

TEST_CASE("parse_goal takes the first content line and strips echoes") {
  CHECK(parse_goal("find a mug") == "find a mug");
  CHECK(parse_goal("[Goal] cool the mug with fridge") == "cool the mug with fridge");
  CHECK(parse_goal("\n\n  heat the egg  \nand ignore this") == "heat the egg");
  CHECK_THROWS_AS(parse_goal(""), ParseError);
  CHECK_THROWS_AS(parse_goal("[Goal]\n[Goal]"), ParseError);
}

TEST_CASE("parse_action passes content through verbatim") {
  CHECK(parse_action("go to countertop 1") == "go to countertop 1");
  CHECK(parse_action("[Action] search[denim jacket]") == "search[denim jacket]");
  CHECK(parse_action("click[Buy Now]") == "click[Buy Now]");
  CHECK_THROWS_AS(parse_action("   "), ParseError);
}

TEST_CASE("parse_finish keys off the first alphabetic token") {
  CHECK(parse_finish("Yes, the mug is cooled.") == true);
  CHECK(parse_finish("no") == false);
  CHECK(parse_finish("  YES.") == true);
  CHECK(parse_finish("[Finish] No, not yet") == false);
  CHECK(parse_finish("**Yes** definitely") == true);
  CHECK(parse_finish("1. no") == false);
  CHECK_THROWS_AS(parse_finish("Perhaps"), ParseError);
  CHECK_THROWS_AS(parse_finish(""), ParseError);
  CHECK_THROWS_AS(parse_finish("?!?"), ParseError);
  CHECK_THROWS_AS(parse_finish("yesterday"), ParseError);
  CHECK_THROWS_AS(parse_finish("not yet"), ParseError);
}

TEST_CASE("parse_plain_step classifies the leading token") {
  auto [tag1, c1] = parse_plain_step("goal: find the mug");
  CHECK(tag1 == Tag::Goal);
  CHECK(c1 == "find the mug");

  auto [tag2, c2] = parse_plain_step("\n\nACTION: go north");
  CHECK(tag2 == Tag::Action);
  CHECK(c2 == "go north");

  auto [tag3, c3] = parse_plain_step("finish: yes");
  CHECK(tag3 == Tag::Finish);
  CHECK(c3 == "yes");

  auto [tag4, c4] = parse_plain_step("think:   the shelf looks empty  ");
  CHECK(tag4 == Tag::Think);
  CHECK(c4 == "the shelf looks empty");

  CHECK_THROWS_AS(parse_plain_step("walk north"), ParseError);
  CHECK_THROWS_AS(parse_plain_step("action:   "), ParseError);
  CHECK_THROWS_AS(parse_plain_step("goalless: nonsense"), ParseError);
  CHECK_THROWS_AS(parse_plain_step(""), ParseError);
  CHECK_THROWS_AS(parse_plain_step("\n  \n"), ParseError);
}

TEST_CASE("sentinel detection tolerates case and trailing punctuation") {
  CHECK(is_reflection_sentinel("Nothing to reflect."));
  CHECK(is_reflection_sentinel("nothing to reflect"));
  CHECK(is_reflection_sentinel("  NOTHING TO REFLECT!  "));
  CHECK(is_reflection_sentinel("Nothing to reflect.."));
  CHECK_FALSE(is_reflection_sentinel("Nothing to reflect, except the search order."));
  CHECK_FALSE(is_reflection_sentinel("Something to reflect."));
  CHECK_FALSE(is_reflection_sentinel(""));
}

TEST_CASE("to_plain_style converts tag lines and keeps the preamble") {
  std::string tagged_body =
      "Task: put a mug on the shelf.\n"
      "[Goal] find a mug\n"
      "[Think] check the countertop\n"
      "[Action] go to countertop 1\n"
      "Observation: You see a mug 2.\n"
      "[Finish] Yes";
  std::string plain = to_plain_style(tagged_body);
  CHECK(plain ==
        "Task: put a mug on the shelf.\n"
        "goal: find a mug\n"
        "think: check the countertop\n"
        "action: go to countertop 1\n"
        "Observation: You see a mug 2.\n"
        "finish: Yes");
}

TEST_CASE("empty optional sections collapse to examples + task + cue") {
  PromptBundle bundle;
  bundle.examples = {FewShotExample{"minihouse", "put", "[Goal] demo goal\n[Think] demo think"}};
  bundle.task = "Your task is to: put a mug on the shelf.";
  bundle.cue = Tag::Goal;
  std::string prompt = assemble_prompt(bundle, 24000);
  CHECK(prompt ==
        "Here are examples of solved tasks:\n\n"
        "[Goal] demo goal\n[Think] demo think\n\n"
        "Your task is to: put a mug on the shelf.\n\n"
        "[Goal]");
}

TEST_CASE("sections appear in the fixed order with their headers") {
  PromptBundle bundle;
  bundle.examples = {FewShotExample{"minihouse", "put", "[Goal] example goal"}};
  bundle.reflections = {
      make_reflection(ReflectionLevel::Low, std::string("find a mug"),
                      "Search the countertop before the cabinets.", 1, "s-000"),
      make_reflection(ReflectionLevel::High, std::nullopt,
                      "Add a goal to clean the mug before putting it away.", 1, "s-000"),
  };
  bundle.past_attempts = {"[Goal] old attempt one", "[Goal] old attempt two"};
  bundle.task = "Your task is to: clean a mug and put it on the shelf.";
  bundle.trajectory = three_goal_trajectory();
  bundle.cue = Tag::Action;

  std::string prompt = assemble_prompt(bundle, 24000);

  CHECK(contains(prompt, "Here are examples of solved tasks:\n\n[Goal] example goal"));
  CHECK(contains(prompt, "Past failed attempts:\n\nAttempt 1:\n[Goal] old attempt one\n\n"
                         "Attempt 2:\n[Goal] old attempt two"));
  CHECK(contains(prompt, "Lessons from past attempts:\n"
                         "- Search the countertop before the cabinets.\n"
                         "- Add a goal to clean the mug before putting it away."));
  CHECK(contains(prompt, render_trajectory(bundle.trajectory)));
  CHECK(prompt.substr(prompt.size() - 8) == "[Action]");

  std::size_t examples_at = prompt.find("Here are examples");
  std::size_t attempts_at = prompt.find("Past failed attempts:");
  std::size_t reflections_at = prompt.find("Lessons from past attempts:");
  std::size_t task_at = prompt.find(bundle.task);
  std::size_t trajectory_at = prompt.find("[Goal] g-one");
  REQUIRE(examples_at != std::string::npos);
  CHECK(examples_at < attempts_at);
  CHECK(attempts_at < reflections_at);
  CHECK(reflections_at < task_at);
  CHECK(task_at < trajectory_at);
}

TEST_CASE("the finish cue asks the Yes/No question about the active goal") {
  PromptBundle bundle;
  bundle.task = "Your task is to: put a mug on the shelf.";
  bundle.trajectory = three_goal_trajectory();
  bundle.cue = Tag::Finish;
  bundle.goal_context = bundle.trajectory.goals.back();
  std::string prompt = assemble_prompt(bundle, 24000);
  std::string expected_tail =
      "[Finish] Has the goal 'g-three' been achieved? Answer Yes or No.";
  REQUIRE(prompt.size() >= expected_tail.size());
  CHECK(prompt.substr(prompt.size() - expected_tail.size()) == expected_tail);

  PromptBundle missing = bundle;
  missing.goal_context.reset();
  CHECK_THROWS_AS(assemble_prompt(missing, 24000), std::invalid_argument);
}

TEST_CASE("finish prompts start at the active segment and drop earlier goals") {
  PromptBundle bundle;
  bundle.task = "Your task is to: put a mug on the shelf.";
  bundle.trajectory = three_goal_trajectory();
  bundle.cue = Tag::Finish;
  bundle.goal_context = bundle.trajectory.goals.back();
  std::string prompt = assemble_prompt(bundle, 24000);
  CHECK(contains(prompt, "[Goal] g-three"));
  CHECK(contains(prompt, "[Think] t-three"));
  CHECK_FALSE(contains(prompt, "g-one"));
  CHECK_FALSE(contains(prompt, "g-two"));
  CHECK_FALSE(contains(prompt, "o-two"));
}

TEST_CASE("finish prompts never include steps before the last Finish=Yes") {
  SplitMix64 rng(0x2545f4914f6cdd1dull);
  for (int iter = 0; iter < 100; ++iter) {
    RandomTrajectoryOptions opt;
    opt.min_finished_goals = 1;
    Trajectory t = random_valid_trajectory(rng, opt);
    // Re-label Goal/Think/Action contents with unique markers; Finish verdicts
    // must stay Yes/No for the boundary scan.
    for (Step& s : t.steps) {
      if (s.tag != Tag::Finish) {
        s.content = "marker-" + std::to_string(s.index) + " " + s.content;
      }
    }
    for (Goal& g : t.goals) g.text = t.steps[g.proposed_at].content;
    if (t.goals.back().status == GoalStatus::Finished) continue;

    PromptBundle bundle;
    bundle.task = "Your task is to: do the fake task.";
    bundle.trajectory = t;
    bundle.cue = Tag::Finish;
    bundle.goal_context = t.goals.back();
    std::string prompt = assemble_prompt(bundle, 1 << 20);

    std::size_t begin = active_segment_begin(t);
    for (const Step& s : t.steps) {
      if (s.tag == Tag::Finish) continue;
      bool present = contains(prompt, s.content);
      if (static_cast<std::size_t>(s.index) >= begin) {
        CHECK(present);
      } else {
        CHECK_FALSE(present);
      }
    }
  }
}

TEST_CASE("over-budget prompts elide the oldest finished segments") {
  PromptBundle bundle;
  bundle.task = "Task: tidy the room.";
  bundle.trajectory = three_goal_trajectory();
  bundle.cue = Tag::Action;

  // Budgets audited by hand against the renderer's layout: the untruncated
  // prompt is 210 bytes, one elided segment gives 174, two give 100.
  std::string full = assemble_prompt(bundle, 24000);
  CHECK(full.size() == 210);
  CHECK_FALSE(contains(full, "earlier sub-goals completed"));

  std::string one_elided = assemble_prompt(bundle, 180);
  CHECK(one_elided ==
        "Task: tidy the room.\n"
        "\n"
        "…(1 earlier sub-goals completed)…\n"
        "[Goal] g-two\n"
        "[Think] t-two\n"
        "[Action] a-two\n"
        "Observation: o-two\n"
        "[Finish] Yes\n"
        "[Goal] g-three\n"
        "[Think] t-three\n"
        "\n"
        "[Action]");

  std::string two_elided = assemble_prompt(bundle, 120);
  CHECK(two_elided ==
        "Task: tidy the room.\n"
        "\n"
        "…(2 earlier sub-goals completed)…\n"
        "[Goal] g-three\n"
        "[Think] t-three\n"
        "\n"
        "[Action]");

  CHECK_THROWS_AS(assemble_prompt(bundle, 90), BudgetError);
}

TEST_CASE("finish prompts refuse budgets smaller than the active segment") {
  PromptBundle bundle;
  bundle.task = "Task: tidy the room.";
  bundle.trajectory = three_goal_trajectory();
  bundle.cue = Tag::Finish;
  bundle.goal_context = bundle.trajectory.goals.back();
  CHECK_NOTHROW(assemble_prompt(bundle, 24000));
  CHECK_THROWS_AS(assemble_prompt(bundle, 64), BudgetError);
}

TEST_CASE("assembled prompts fit the budget or raise BudgetError") {
  SplitMix64 rng(0xdeadbeefcafef00dull);
  int returned = 0;
  int refused = 0;
  for (int iter = 0; iter < 300; ++iter) {
    PromptBundle bundle;
    bundle.task = "Your task is to: do the fake task number " + std::to_string(iter) + ".";
    bundle.trajectory = random_valid_trajectory(rng);
    Tag cues[] = {Tag::Goal, Tag::Think, Tag::Action, Tag::Finish};
    bundle.cue = cues[rng.below(4)];
    if (bundle.cue == Tag::Finish) {
      if (bundle.trajectory.goals.empty()) bundle.cue = Tag::Goal;
      else bundle.goal_context = bundle.trajectory.goals.back();
    }
    std::size_t budget = 60 + rng.below(3000);
    try {
      std::string prompt = assemble_prompt(bundle, budget);
      CHECK(prompt.size() <= budget);
      ++returned;
    } catch (const BudgetError&) {
      ++refused;
    }
  }
  CHECK(returned > 0);
  CHECK(refused > 0);
}

TEST_CASE("plain style swaps prefixes, converts examples and uses the plain cue") {
  PromptBundle bundle;
  bundle.examples = {FewShotExample{
      "minihouse", "put",
      "Task: demo.\n[Goal] find a mug\n[Action] go north\nObservation: You see a wall.\n[Finish] Yes"}};
  bundle.task = "Your task is to: put a mug on the shelf.";
  Trajectory t;
  t.steps = {tagged(0, Tag::Goal, "find a mug"), tagged(1, Tag::Think, "check the shelf")};
  t.goals = {Goal{0, "find a mug", GoalStatus::Active, 0}};
  bundle.trajectory = t;
  bundle.cue = Tag::Action;

  std::string prompt = assemble_prompt(bundle, 24000, RenderStyle::Plain);
  CHECK(contains(prompt, "goal: find a mug"));
  CHECK(contains(prompt, "think: check the shelf"));
  CHECK(contains(prompt, "finish: Yes"));
  CHECK(contains(prompt, "Task: demo."));
  CHECK_FALSE(contains(prompt, "[Goal]"));
  CHECK_FALSE(contains(prompt, "[Action]"));
  std::string cue(kPlainCueLine);
  REQUIRE(prompt.size() >= cue.size());
  CHECK(prompt.substr(prompt.size() - cue.size()) == cue);
}

TEST_CASE("low reflection prompts frame the segment under its goal") {
  std::vector<std::string> exemplars = {"Example reflection body one."};
  std::string segment = "[Goal] find a mug\n[Think] try the shelf\n[Action] go north\n"
                        "Observation: Nothing happens.\n[Finish] No";
  std::string prompt = make_low_reflection_prompt("find a mug", segment, exemplars);
  CHECK(contains(prompt, "Here are examples of reflections on sub-goal attempts:"));
  CHECK(contains(prompt, "Example reflection body one."));
  CHECK(contains(prompt, "You attempted to achieve this goal: find a mug"));
  CHECK(contains(prompt, segment));
  CHECK(contains(prompt, "might be correct and there might be nothing to reflect on"));
  CHECK(contains(prompt, "reply exactly \"Nothing to reflect.\""));

  std::string bare = make_low_reflection_prompt("find a mug", segment, {});
  CHECK_FALSE(contains(bare, "Here are examples"));
}

TEST_CASE("high reflection prompts number the goal sequence with statuses") {
  std::vector<Goal> goals = {
      Goal{0, "find a mug", GoalStatus::Finished, 0},
      Goal{1, "put the mug on the shelf", GoalStatus::OpenAtTermination, 4},
  };
  std::string prompt =
      make_high_reflection_prompt(goals, "put a clean mug on the shelf.", {"High exemplar."});
  CHECK(contains(prompt, "Here is an example of a reflection on a goal sequence:"));
  CHECK(contains(prompt, "The task was not completed. Task: put a clean mug on the shelf."));
  CHECK(contains(prompt, "1. find a mug (finished)"));
  CHECK(contains(prompt, "2. put the mug on the shelf (open-at-termination)"));
  CHECK(contains(prompt, "might be correct and there might be nothing to reflect on"));
  CHECK(contains(prompt, "reply exactly \"Nothing to reflect.\""));
}

TEST_CASE("full reflection prompts skip the sentinel escape hatch") {
  std::string rendered = "[Goal] find a mug\n[Think] hm\n[Action] wait\n"
                         "Observation: Nothing happens.\n[Finish] No";
  std::string prompt = make_full_reflection_prompt("put a mug on the shelf.", rendered,
                                                   {"Full exemplar body."});
  CHECK(contains(prompt, "Here is an example of a reflection on a failed attempt:"));
  CHECK(contains(prompt, "The following attempt at a task failed.\nTask: put a mug on the shelf."));
  CHECK(contains(prompt, rendered));
  CHECK_FALSE(contains(prompt, "Nothing to reflect"));
  CHECK(contains(prompt, "reflect on what went wrong"));
}
