#pragma once

// ReAct-style episode loop: observe, let the planner emit one step, execute,
// record. Success is decided by the task evaluator alone.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcua/rollout/trajectory.hpp"
#include "hcua/tasksynth/task.hpp"
#include "hcua/toolforge/tool.hpp"
#include "hcua/world/world.hpp"

namespace hcua::rollout {

struct Observation {
  std::string instruction;
  world::Screen screen;
  std::string memory;
  std::vector<const toolforge::ToolSpec*> exposed_tools;  // fixed for the episode
  std::string last_effect;
  std::size_t step_index = 0;
};

/// The text a language-model planner would read.
std::string observation_text(const Observation& obs);
/// Hex digest of observation_text.
std::string observation_digest(const Observation& obs);

class Grounder {
 public:
  virtual ~Grounder() = default;
  /// A point on screen for the described element, or nullopt.
  virtual std::optional<std::pair<int, int>> locate(const world::Screen& screen, std::string_view description) const = 0;
};

/// Exact label match, then substring match; ties go to the smallest (y0, x0).
/// Returns the bbox center.
class ReferenceGrounder : public Grounder {
 public:
  std::optional<std::pair<int, int>> locate(const world::Screen& screen, std::string_view description) const override;
};

class Planner {
 public:
  virtual ~Planner() = default;
  virtual void begin_episode(const tasksynth::Task& task, std::uint64_t seed) = 0;
  /// One step in the step grammar; anything else is recorded as malformed.
  virtual std::string next_step(const Observation& obs, const Grounder& grounder) = 0;
};

inline constexpr std::size_t kMemoryCap = 2000;

struct EpisodeConfig {
  std::size_t max_steps = 15;
  std::size_t tool_cap = toolforge::kDefaultToolCap;
  std::size_t memory_cap = kMemoryCap;
};

/// Drops whole leading lines until the text fits; a single over-long line
/// keeps its tail. The flag reports whether anything was dropped.
std::pair<std::string, bool> cap_memory(std::string memory, std::size_t cap);

/// Evaluator verdict on a final state; the only source of success.
bool label(const world::WorldState& final_state, const tasksynth::Task& task);

/// Throws std::invalid_argument when max_steps is zero.
Trajectory run_episode(const tasksynth::Task& task, Planner& planner, const Grounder& grounder,
                       const toolforge::ToolRegistry& registry, const EpisodeConfig& cfg, std::uint64_t seed,
                       world::WorldState* final_state = nullptr);

/// K episodes with seeds base_seed .. base_seed + K - 1. Throws
/// std::invalid_argument when k is zero.
std::vector<Trajectory> run_batch(const tasksynth::Task& task, Planner& planner, const Grounder& grounder,
                                  const toolforge::ToolRegistry& registry, const EpisodeConfig& cfg, std::size_t k,
                                  std::uint64_t base_seed);

// ---------------------------------------------------------------------------
// Metrics

struct ToolPattern {
  std::size_t success_with_tools = 0;
  std::size_t success_without_tools = 0;
  std::size_t fail_with_tools = 0;
  std::size_t fail_without_tools = 0;
  bool operator==(const ToolPattern&) const = default;
};

struct MetricsReport {
  std::size_t task_count = 0;
  std::size_t trajectory_count = 0;
  double success_rate = 0.0;  // mean over tasks of per-task mean success
  double pass_at_4 = 0.0;     // first four trajectories per task
  std::vector<std::string> pass_at_4_short;  // tasks with fewer than four trajectories
  std::optional<double> avg_steps;           // over successful trajectories
  ToolPattern tool_pattern;
  std::size_t malformed_steps = 0;  // format errors, measured only
  std::size_t tool_errors = 0;
};

/// Throws std::invalid_argument for a task without trajectories.
MetricsReport metrics(const std::map<std::string, std::vector<Trajectory>>& trajs_by_task);
std::string metrics_text(const MetricsReport& report);
nlohmann::json metrics_json(const MetricsReport& report);

}  // namespace hcua::rollout
