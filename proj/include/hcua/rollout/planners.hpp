#pragma once

// Scripted reference planners. Each goal leaf is solved by a fixed GUI script
// or, when a matching tool is exposed, by a single tool call.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcua/actionspace/action.hpp"
#include "hcua/core/rng.hpp"
#include "hcua/rollout/episode.hpp"
#include "hcua/verify/evaluator.hpp"

namespace hcua::rollout {

struct ScriptStep {
  enum class Kind { click, key, type };
  Kind kind = Kind::key;
  std::string text;  // element description, key combo or typed text
  bool operator==(const ScriptStep&) const = default;
};

/// "click \"Name\"", "key ctrl+o", "type \"...\"".
std::string describe(const ScriptStep& step);

/// Leaves that must hold: every child of an all-node, the first child of an
/// any-node.
std::vector<verify::AtomicEvaluator> goal_leaves(const verify::EvaluatorConfig& cfg);

/// Keyboard and pointer steps that make the leaf hold from a fixture
/// workspace; empty when no GUI route exists (arbitrary clipboard text).
std::vector<ScriptStep> gui_script(const verify::AtomicEvaluator& leaf);

/// A single exposed tool call that makes the leaf hold, if any.
std::optional<actionspace::ToolCall> tool_script(const verify::AtomicEvaluator& leaf,
                                                 std::span<const toolforge::ToolSpec* const> exposed);

struct LeafPlan {
  verify::AtomicEvaluator goal;
  std::vector<ScriptStep> gui;
  std::optional<actionspace::ToolCall> tool;
};

std::vector<LeafPlan> plan_leaves(const verify::EvaluatorConfig& goals,
                                  std::span<const toolforge::ToolSpec* const> exposed);

/// Grounds a click through the grounder; an unresolvable description becomes
/// a click at (0, 0), which hits nothing.
actionspace::Action ground(const ScriptStep& step, const Observation& obs, const Grounder& grounder);

/// Step text with a memory block.
std::string step_text(const std::string& memory, const actionspace::Action& action);

std::string progress_memory(const std::string& instruction, std::size_t done, std::size_t total,
                            const std::string& next);

/// A well-formed action drawn from the screen: a click on an enabled element
/// (about 60%), a bound-looking key (25%) or an exposed tool call (15%).
actionspace::Action random_action(const Observation& obs, Rng& rng);

/// Follows a flat script built from the goal leaves, preferring tools.
class ScriptedPlanner : public Planner {
 public:
  void begin_episode(const tasksynth::Task& task, std::uint64_t seed) override;
  std::string next_step(const Observation& obs, const Grounder& grounder) override;

 protected:
  /// The goals the planner believes in; nullopt makes it give up at once.
  virtual std::optional<verify::EvaluatorConfig> goals(const tasksynth::Task& task) const = 0;

 private:
  struct Move {
    std::optional<ScriptStep> gui;
    std::optional<actionspace::ToolCall> tool;
  };
  void build(const Observation& obs);

  tasksynth::Task task_;
  bool built_ = false;
  bool give_up_ = false;
  std::vector<Move> moves_;
  std::size_t cursor_ = 0;
};

/// Reads the goals straight from the task evaluator.
class OraclePlanner : public ScriptedPlanner {
 protected:
  std::optional<verify::EvaluatorConfig> goals(const tasksynth::Task& task) const override;
};

/// Reads the goals from the instruction text only.
class InstructionPlanner : public ScriptedPlanner {
 protected:
  std::optional<verify::EvaluatorConfig> goals(const tasksynth::Task& task) const override;
};

inline constexpr double kDefaultEpsilon = 0.1;

/// With probability epsilon per step, the inner planner's action is replaced
/// by random_action. The inner planner still advances, so the replaced step
/// is lost.
class NoisyPlanner : public Planner {
 public:
  NoisyPlanner(std::unique_ptr<Planner> inner, double epsilon);
  void begin_episode(const tasksynth::Task& task, std::uint64_t seed) override;
  std::string next_step(const Observation& obs, const Grounder& grounder) override;

 private:
  std::unique_ptr<Planner> inner_;
  double epsilon_;
  Rng rng_{0};
};

}  // namespace hcua::rollout
