#pragma once

// The RL loop: group rollouts, rewards, advantages and one grpo_update per step.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcua/learn/grpo.hpp"
#include "hcua/learn/reward.hpp"

namespace hcua::learn {

inline constexpr std::size_t kTrainSteps = 150;
inline constexpr std::size_t kGroupSize = 8;
inline constexpr double kDefaultLr = 2.0;

struct TrainConfig {
  std::size_t steps = kTrainSteps;
  std::size_t group_size = kGroupSize;
  double lr = kDefaultLr;
  ClipConfig clip;
  double tool_bonus = kToolBonus;
  StepWeighting weighting = StepWeighting::per_step;
  rollout::EpisodeConfig episode;
  std::size_t eval_k = kGroupSize;
  std::uint64_t seed = 0;
};

struct PolicyEval {
  double success_rate = 0.0;  // macro mean over tasks
  double mean_reward = 0.0;
  rollout::ToolPattern pattern;
  std::size_t trajectories = 0;
  /// Successful trajectories that used a tool, over all trajectories.
  double success_with_tools_fraction() const;
};

/// eval_k episodes per task with seeds drawn from the "eval" sub-stream.
PolicyEval evaluate_policy(const std::vector<tasksynth::Task>& tasks, const PolicyParams& policy,
                           const toolforge::ToolRegistry& registry, const rollout::Grounder& grounder,
                           const TrainConfig& cfg);

/// Difficulty of every task under the policy, K = kDifficultyRollouts.
std::vector<DifficultyRecord> policy_difficulty(const std::vector<tasksynth::Task>& tasks, const PolicyParams& policy,
                                                const toolforge::ToolRegistry& registry,
                                                const rollout::Grounder& grounder, const TrainConfig& cfg);

struct TrainLogEntry {
  std::size_t step = 0;
  double success_rate = 0.0;  // of this step's training rollouts
  double mean_reward = 0.0;
  rollout::ToolPattern pattern;
  std::size_t groups_used = 0;  // groups with non-zero variance
};

struct TrainResult {
  PolicyParams initial;
  PolicyParams final;
  PolicyEval before;
  PolicyEval after;
  std::vector<TrainLogEntry> log;
};

/// Throws std::invalid_argument for an empty task list or a group size below 2.
TrainResult train(const std::vector<tasksynth::Task>& tasks, const PolicyParams& init,
                  const toolforge::ToolRegistry& registry, const rollout::Grounder& grounder, const TrainConfig& cfg);

nlohmann::json eval_json(const PolicyEval& e);
nlohmann::json train_log_json(const TrainResult& r);

}  // namespace hcua::learn
