#pragma once

// Trajectory rewards, per-step propagation, difficulty scores and
// group-relative advantages.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hcua/rollout/episode.hpp"
#include "hcua/tasksynth/task.hpp"

namespace hcua::learn {

inline constexpr double kToolBonus = 0.3;

struct RewardRecord {
  double r_env = 0.0;   // +1 success, -1 failure
  double r_tool = 0.0;  // tool_bonus on a successful trajectory with a tool call
  double total = 0.0;
  bool operator==(const RewardRecord&) const = default;
};

/// tool_bonus = 0 gives the ablation without the tool reward.
RewardRecord reward(const rollout::Trajectory& traj, double tool_bonus = kToolBonus);

/// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> values);

/// Every step gets total / length. If the compensated sum of those shares
/// misses the total (from length 49 on for some totals), the residual goes to
/// the last step so that compensated_sum(result) == total always holds; the
/// last share then differs from the others by less than 1e-12 relative.
/// Throws std::invalid_argument for a trajectory without steps.
std::vector<double> propagate(const RewardRecord& rec, const rollout::Trajectory& traj);

using tasksynth::DifficultyRecord;

/// Score = successes / trajectories. Throws std::invalid_argument when empty.
DifficultyRecord difficulty_from(const std::string& task_id, std::span<const rollout::Trajectory> trajs);

inline constexpr std::size_t kDifficultyRollouts = 8;

DifficultyRecord difficulty(const tasksynth::Task& task, rollout::Planner& planner, const rollout::Grounder& grounder,
                            const toolforge::ToolRegistry& registry, const rollout::EpisodeConfig& cfg,
                            std::size_t k = kDifficultyRollouts, std::uint64_t base_seed = 0);

inline constexpr double kBandLo = 0.4;
inline constexpr double kBandHi = 0.8;

/// Ids with lo <= score <= hi, sorted. Throws std::invalid_argument when lo > hi.
std::vector<std::string> filter_band(std::span<const DifficultyRecord> records, double lo = kBandLo,
                                     double hi = kBandHi);

inline constexpr double kAdvantageDelta = 1e-8;

/// (r - mean) / std with the population std. Groups whose std does not exceed
/// kAdvantageDelta get all-zero advantages. Throws std::invalid_argument for
/// fewer than two totals.
std::vector<double> group_advantages(std::span<const double> totals);

}  // namespace hcua::learn
