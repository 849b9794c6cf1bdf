// Prompt assembly and completion parsing: renders trajectories in the tag
// format, builds the three-part prompt for each cue, parses goals, actions
// and finish verdicts out of raw completions, and builds reflection prompts.
#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hicrl/core.hpp"
#include "hicrl/util.hpp"

namespace hicrl {

// Tagged is the HCRL format; Plain is the tag-free ablation where steps are
// written as "goal:", "think:", "action:", "finish:" lines.
enum class RenderStyle { Tagged, Plain };

inline constexpr std::string_view kExamplesHeader = "Here are examples of solved tasks:";
inline constexpr std::string_view kAttemptsHeader = "Past failed attempts:";
inline constexpr std::string_view kReflectionsHeader = "Lessons from past attempts:";
inline constexpr std::string_view kObservationPrefix = "Observation: ";
inline constexpr std::string_view kPlainCueLine =
    "What do you do next? Reply with one line starting with goal:, think:, action:, or finish:.";
inline constexpr std::string_view kReflectionSentinel = "Nothing to reflect.";

inline std::string_view plain_prefix(Tag tag) {
  switch (tag) {
    case Tag::Goal: return "goal: ";
    case Tag::Think: return "think: ";
    case Tag::Action: return "action: ";
    case Tag::Finish: return "finish: ";
  }
  return "goal: ";
}

inline std::string render_step(const Step& step, RenderStyle style = RenderStyle::Tagged) {
  std::string out;
  if (style == RenderStyle::Tagged) {
    out += tag_text(step.tag);
    out += ' ';
  } else {
    out += plain_prefix(step.tag);
  }
  out += step.content;
  if (step.observation) {
    out += '\n';
    out += kObservationPrefix;
    out += *step.observation;
  }
  return out;
}

// Renders steps[begin, end) one step per line (actions take a second line
// for their observation).
inline std::string render_steps(const std::vector<Step>& steps, std::size_t begin,
                                std::size_t end, RenderStyle style = RenderStyle::Tagged) {
  std::string out;
  for (std::size_t i = begin; i < end && i < steps.size(); ++i) {
    if (!out.empty()) out += '\n';
    out += render_step(steps[i], style);
  }
  return out;
}

inline std::string render_trajectory(const Trajectory& t,
                                     RenderStyle style = RenderStyle::Tagged) {
  return render_steps(t.steps, 0, t.steps.size(), style);
}

// Step indices immediately after each Finish step with content "Yes". These
// are the boundaries between completed sub-goal segments.
inline std::vector<std::size_t> finish_yes_boundaries(const Trajectory& t) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (t.steps[i].tag == Tag::Finish && t.steps[i].content == "Yes") out.push_back(i + 1);
  }
  return out;
}

// First step index of the segment serving the current goal: the step right
// after the last Finish=Yes, or 0 when no goal has been finished yet.
inline std::size_t active_segment_begin(const Trajectory& t) {
  auto b = finish_yes_boundaries(t);
  return b.empty() ? 0 : b.back();
}

// --- Tag-grammar text parsing --------------------------------------------

struct ParsedTrajectoryText {
  std::vector<std::string> preamble;  // lines before the first tag line
  std::vector<Step> steps;
};

// Parses trajectory text in the tag format. Lines before the first tag are
// preamble (task banners in few-shot files). A line starting with a tag
// begins a step; an "Observation: " line attaches to the pending Action;
// later untagged lines continue the observation (or the step content).
inline ParsedTrajectoryText parse_trajectory_text(std::string_view text) {
  ParsedTrajectoryText out;
  bool in_observation = false;
  for (const std::string& raw_line : split_lines(text)) {
    std::string_view line = trim_view(raw_line);
    std::optional<Tag> tag;
    std::string_view rest;
    if (!line.empty() && line.front() == '[') {
      std::size_t close = line.find(']');
      if (close != std::string_view::npos) {
        tag = tag_from_text(line.substr(0, close + 1));
        rest = trim_view(line.substr(close + 1));
      }
    }
    if (tag) {
      Step s;
      s.index = static_cast<int>(out.steps.size());
      s.tag = *tag;
      s.content = std::string(rest);
      out.steps.push_back(std::move(s));
      in_observation = false;
      continue;
    }
    if (line.empty()) continue;
    if (!out.steps.empty() && out.steps.back().tag == Tag::Action &&
        starts_with_ci(line, "Observation:")) {
      out.steps.back().observation = trim(line.substr(std::string_view("Observation:").size()));
      in_observation = true;
      continue;
    }
    if (out.steps.empty()) {
      out.preamble.emplace_back(line);
    } else if (in_observation) {
      *out.steps.back().observation += '\n';
      *out.steps.back().observation += line;
    } else {
      out.steps.back().content += '\n';
      out.steps.back().content += std::string(line);
    }
  }
  return out;
}

inline Trajectory trajectory_from_steps(std::vector<Step> steps) {
  Trajectory t;
  t.steps = std::move(steps);
  return t;
}

// --- Completion parsing ---------------------------------------------------

// Strips any echoed tag prefixes ("[Goal]", "[Action]: ", repeated) from the
// front of the text. Idempotent.
inline std::string_view strip_tag_echo(std::string_view text) {
  for (;;) {
    std::string_view t = text;
    std::size_t skip = 0;
    while (skip < t.size() && std::isspace(static_cast<unsigned char>(t[skip]))) ++skip;
    t = t.substr(skip);
    bool stripped = false;
    if (!t.empty() && t.front() == '[') {
      std::size_t close = t.find(']');
      if (close != std::string_view::npos && tag_from_text(t.substr(0, close + 1))) {
        t = t.substr(close + 1);
        if (!t.empty() && t.front() == ':') t = t.substr(1);
        stripped = true;
      }
    }
    if (!stripped) return text;
    text = t;
  }
}

// First non-empty line after tag-echo stripping.
inline std::string extract_first_content_line(std::string_view text, std::string_view what) {
  for (const std::string& line : split_lines(std::string(strip_tag_echo(text)))) {
    std::string content = trim(strip_tag_echo(line));
    if (!content.empty()) return content;
  }
  throw ParseError("empty " + std::string(what) + " completion");
}

inline std::string parse_goal(std::string_view completion) {
  return extract_first_content_line(completion, "goal");
}

inline std::string parse_action(std::string_view completion) {
  return extract_first_content_line(completion, "action");
}

inline std::string parse_think(std::string_view completion) {
  return extract_first_content_line(completion, "thought");
}

// True iff the first alphabetic token is "yes" (case-insensitive), false iff
// "no". Anything else is a ParseError; the engine retries once and then
// defaults to false.
inline bool parse_finish(std::string_view completion) {
  std::string_view text = strip_tag_echo(completion);
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isalpha(static_cast<unsigned char>(text[i]))) {
      std::size_t j = i;
      while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
      std::string token = to_lower(text.substr(i, j - i));
      if (token == "yes") return true;
      if (token == "no") return false;
      throw ParseError("finish verdict is neither Yes nor No: '" + token + "'");
    }
    ++i;
  }
  throw ParseError("finish completion has no alphabetic token");
}

// Leading-token classification for the tag-free ablation: "goal: x",
// "think: x", "action: x", "finish: yes|no".
inline std::pair<Tag, std::string> parse_plain_step(std::string_view completion) {
  for (const std::string& raw : split_lines(std::string(completion))) {
    std::string_view line = trim_view(raw);
    if (line.empty()) continue;
    for (Tag tag : {Tag::Goal, Tag::Think, Tag::Action, Tag::Finish}) {
      std::string_view prefix = plain_prefix(tag);
      std::string_view name = prefix.substr(0, prefix.size() - 2);  // drop ": "
      if (starts_with_ci(line, name) && line.size() > name.size() &&
          line[name.size()] == ':') {
        std::string content = trim(line.substr(name.size() + 1));
        if (content.empty()) throw ParseError("empty content after '" + std::string(name) + ":'");
        return {tag, content};
      }
    }
    throw ParseError("line does not start with goal:/think:/action:/finish:: '" +
                     std::string(line) + "'");
  }
  throw ParseError("empty completion");
}

inline bool is_reflection_sentinel(std::string_view text) {
  std::string t = to_lower(trim(text));
  while (!t.empty() && (t.back() == '.' || t.back() == '!')) t.pop_back();
  return t == "nothing to reflect";
}

// Re-renders a tagged trajectory text in the plain style, preserving any
// preamble lines. Used to derive tag-free few-shot examples.
inline std::string to_plain_style(std::string_view tagged_body) {
  ParsedTrajectoryText parsed = parse_trajectory_text(tagged_body);
  std::string out;
  for (const std::string& line : parsed.preamble) {
    out += line;
    out += '\n';
  }
  out += render_steps(parsed.steps, 0, parsed.steps.size(), RenderStyle::Plain);
  return out;
}

// --- Prompt assembly -------------------------------------------------------

// All context for one cue. `reflections` and `past_attempts` are already
// routed for the cue; `goal_context` is required when cue == Finish.
struct PromptBundle {
  std::vector<FewShotExample> examples;
  std::vector<Reflection> reflections;
  std::vector<std::string> past_attempts;
  std::string task;
  Trajectory trajectory;
  Tag cue = Tag::Goal;
  std::optional<Goal> goal_context;
};

namespace detail {

inline std::string examples_section(const PromptBundle& bundle, RenderStyle style) {
  if (bundle.examples.empty()) return {};
  std::string out(kExamplesHeader);
  for (const FewShotExample& ex : bundle.examples) {
    out += "\n\n";
    out += style == RenderStyle::Plain ? to_plain_style(ex.body) : trim(ex.body);
  }
  return out;
}

inline std::string attempts_section(const PromptBundle& bundle) {
  if (bundle.past_attempts.empty()) return {};
  std::string out(kAttemptsHeader);
  for (std::size_t i = 0; i < bundle.past_attempts.size(); ++i) {
    out += "\n\nAttempt " + std::to_string(i + 1) + ":\n";
    out += trim(bundle.past_attempts[i]);
  }
  return out;
}

inline std::string reflections_section(const PromptBundle& bundle) {
  if (bundle.reflections.empty()) return {};
  std::string out(kReflectionsHeader);
  for (const Reflection& r : bundle.reflections) {
    out += "\n- ";
    out += r.body;
  }
  return out;
}

inline std::string cue_section(const PromptBundle& bundle, RenderStyle style) {
  if (style == RenderStyle::Plain) return std::string(kPlainCueLine);
  if (bundle.cue == Tag::Finish) {
    return "[Finish] Has the goal '" + bundle.goal_context->text +
           "' been achieved? Answer Yes or No.";
  }
  return std::string(tag_text(bundle.cue));
}

inline std::string join_sections(const std::vector<std::string>& sections) {
  std::string out;
  for (const std::string& s : sections) {
    if (s.empty()) continue;
    if (!out.empty()) out += "\n\n";
    out += s;
  }
  return out;
}

}  // namespace detail

// Builds the prompt for one cue: few-shot examples, routed lessons (or raw
// past attempts), the task statement, the trajectory so far and the cue line.
// Finish cues see only the sub-trajectory after the last finished goal. When
// the result exceeds char_budget, the oldest completed sub-goal segments are
// elided (replaced with one marker line) before giving up with BudgetError;
// the active segment is never elided.
inline std::string assemble_prompt(const PromptBundle& bundle, std::size_t char_budget,
                                   RenderStyle style = RenderStyle::Tagged) {
  if (bundle.cue == Tag::Finish && !bundle.goal_context) {
    throw std::invalid_argument("Finish cue requires goal_context");
  }
  std::vector<std::string> fixed = {
      detail::examples_section(bundle, style),
      detail::attempts_section(bundle),
      detail::reflections_section(bundle),
      trim(bundle.task),
  };
  const std::string cue_line = detail::cue_section(bundle, style);
  const std::vector<Step>& steps = bundle.trajectory.steps;

  auto assemble_with_trajectory = [&](const std::string& traj_section) {
    std::vector<std::string> sections = fixed;
    sections.push_back(traj_section);
    sections.push_back(cue_line);
    return detail::join_sections(sections);
  };

  if (bundle.cue == Tag::Finish && style == RenderStyle::Tagged) {
    std::size_t begin = active_segment_begin(bundle.trajectory);
    std::string prompt = assemble_with_trajectory(render_steps(steps, begin, steps.size(), style));
    if (prompt.size() > char_budget) {
      throw BudgetError("finish prompt exceeds char budget: " + std::to_string(prompt.size()) +
                        " > " + std::to_string(char_budget));
    }
    return prompt;
  }

  std::vector<std::size_t> boundaries = finish_yes_boundaries(bundle.trajectory);
  for (std::size_t elided = 0; elided <= boundaries.size(); ++elided) {
    std::string traj_section;
    if (elided > 0) {
      traj_section = "…(" + std::to_string(elided) + " earlier sub-goals completed)…";
      std::string rest = render_steps(steps, boundaries[elided - 1], steps.size(), style);
      if (!rest.empty()) {
        traj_section += '\n';
        traj_section += rest;
      }
    } else {
      traj_section = render_steps(steps, 0, steps.size(), style);
    }
    std::string prompt = assemble_with_trajectory(traj_section);
    if (prompt.size() <= char_budget) return prompt;
  }
  throw BudgetError("prompt exceeds char budget even with all completed sub-goals elided (budget " +
                    std::to_string(char_budget) + ")");
}

// --- Reflection prompts -----------------------------------------------------

namespace detail {

inline std::string exemplar_section(std::string_view header,
                                    const std::vector<std::string>& exemplars) {
  if (exemplars.empty()) return {};
  std::string out(header);
  for (const std::string& ex : exemplars) {
    out += "\n\n";
    out += trim(ex);
  }
  out += "\n\n";
  return out;
}

}  // namespace detail

// Low-level reflection: the sub-goal replaces the task objective and the
// agent is told the trajectory might already be correct.
inline std::string make_low_reflection_prompt(std::string_view goal_text,
                                              std::string_view rendered_segment,
                                              const std::vector<std::string>& exemplars) {
  std::string out = detail::exemplar_section("Here are examples of reflections on sub-goal attempts:",
                                             exemplars);
  out += "You attempted to achieve this goal: ";
  out += goal_text;
  out += "\nThis is the trajectory of the attempt:\n";
  out += rendered_segment;
  out += "\n\nThe trajectory might be correct and there might be nothing to reflect on. "
         "If so, reply exactly \"Nothing to reflect.\" Otherwise, state in one or two "
         "sentences what went wrong while pursuing this goal and what to do differently "
         "next time.";
  return out;
}

// High-level reflection over the sequence of proposed goals.
inline std::string make_high_reflection_prompt(const std::vector<Goal>& goals,
                                               std::string_view task,
                                               const std::vector<std::string>& exemplars) {
  std::string out = detail::exemplar_section("Here is an example of a reflection on a goal sequence:",
                                             exemplars);
  out += "The task was not completed. Task: ";
  out += task;
  out += "\nThese sub-goals were proposed, in order:\n";
  for (const Goal& g : goals) {
    out += std::to_string(g.id + 1) + ". " + g.text + " (" +
           std::string(goal_status_text(g.status)) + ")\n";
  }
  out += "\nThe goal sequence might be correct and there might be nothing to reflect on. "
         "If so, reply exactly \"Nothing to reflect.\" Otherwise, state in one or two "
         "sentences what was wrong with this sequence of goals and how to pick better "
         "goals next time.";
  return out;
}

// Full-trajectory reflection used by the reflexion ablation.
inline std::string make_full_reflection_prompt(std::string_view task,
                                               std::string_view rendered_trajectory,
                                               const std::vector<std::string>& exemplars) {
  std::string out = detail::exemplar_section("Here is an example of a reflection on a failed attempt:",
                                             exemplars);
  out += "The following attempt at a task failed.\nTask: ";
  out += task;
  out += "\n";
  out += rendered_trajectory;
  out += "\n\nIn one or two sentences, reflect on what went wrong and state a plan to "
         "succeed next time.";
  return out;
}

}  // namespace hicrl
