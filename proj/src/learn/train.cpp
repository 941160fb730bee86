#include "hcua/learn/train.hpp"

#include <stdexcept>

#include "hcua/core/hash.hpp"

namespace hcua::learn {

namespace {

void count(rollout::ToolPattern& p, const rollout::Trajectory& t) {
  if (t.success) ++(t.used_tool_call ? p.success_with_tools : p.success_without_tools);
  else ++(t.used_tool_call ? p.fail_with_tools : p.fail_without_tools);
}

nlohmann::json pattern_json(const rollout::ToolPattern& p) {
  return {{"success_with_tools", p.success_with_tools},
          {"success_without_tools", p.success_without_tools},
          {"fail_with_tools", p.fail_with_tools},
          {"fail_without_tools", p.fail_without_tools}};
}

std::uint64_t episode_seed(std::uint64_t stream, std::size_t task_index, std::size_t i) {
  return derive_seed(derive_seed(stream, task_index), i);
}

}  // namespace

double PolicyEval::success_with_tools_fraction() const {
  return trajectories == 0 ? 0.0 : static_cast<double>(pattern.success_with_tools) / static_cast<double>(trajectories);
}

PolicyEval evaluate_policy(const std::vector<tasksynth::Task>& tasks, const PolicyParams& policy,
                           const toolforge::ToolRegistry& registry, const rollout::Grounder& grounder,
                           const TrainConfig& cfg) {
  PolicyEval e;
  if (tasks.empty()) return e;
  const std::uint64_t stream = derive_seed(cfg.seed, "eval");
  PolicyPlanner planner(policy);
  double sr = 0.0;
  std::vector<double> rewards;
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    std::size_t wins = 0;
    for (std::size_t i = 0; i < cfg.eval_k; ++i) {
      const auto t = rollout::run_episode(tasks[ti], planner, grounder, registry, cfg.episode,
                                          episode_seed(stream, ti, i));
      wins += t.success ? 1 : 0;
      count(e.pattern, t);
      rewards.push_back(reward(t, cfg.tool_bonus).total);
      ++e.trajectories;
    }
    sr += static_cast<double>(wins) / static_cast<double>(cfg.eval_k);
  }
  e.success_rate = sr / static_cast<double>(tasks.size());
  e.mean_reward = compensated_sum(rewards) / static_cast<double>(rewards.size());
  return e;
}

std::vector<DifficultyRecord> policy_difficulty(const std::vector<tasksynth::Task>& tasks, const PolicyParams& policy,
                                                const toolforge::ToolRegistry& registry,
                                                const rollout::Grounder& grounder, const TrainConfig& cfg) {
  const std::uint64_t stream = derive_seed(cfg.seed, "difficulty");
  PolicyPlanner planner(policy);
  std::vector<DifficultyRecord> out;
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    out.push_back(difficulty(tasks[ti], planner, grounder, registry, cfg.episode, kDifficultyRollouts,
                             derive_seed(stream, ti)));
  }
  return out;
}

TrainResult train(const std::vector<tasksynth::Task>& tasks, const PolicyParams& init,
                  const toolforge::ToolRegistry& registry, const rollout::Grounder& grounder, const TrainConfig& cfg) {
  if (tasks.empty()) throw std::invalid_argument("train: no tasks");
  if (cfg.group_size < 2) throw std::invalid_argument("train: group size must be at least 2");
  cfg.clip.check();

  TrainResult result;
  result.initial = init;
  result.before = evaluate_policy(tasks, init, registry, grounder, cfg);
  PolicyParams policy = init;
  const std::uint64_t stream = derive_seed(cfg.seed, "train");
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const std::uint64_t step_stream = derive_seed(stream, step);
    PolicyPlanner planner(policy);
    std::vector<Group> groups;
    TrainLogEntry entry;
    entry.step = step;
    std::vector<double> rewards;
    std::size_t wins = 0;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
      Group g;
      std::vector<double> totals;
      for (std::size_t i = 0; i < cfg.group_size; ++i) {
        const auto t = rollout::run_episode(tasks[ti], planner, grounder, registry, cfg.episode,
                                            episode_seed(step_stream, ti, i));
        totals.push_back(reward(t, cfg.tool_bonus).total);
        g.push_back(SampledTrajectory{planner.decisions(), t.length, 0.0});
        count(entry.pattern, t);
        wins += t.success ? 1 : 0;
      }
      const auto adv = group_advantages(totals);
      bool informative = false;
      for (std::size_t i = 0; i < g.size(); ++i) {
        g[i].advantage = adv[i];
        informative = informative || adv[i] != 0.0;
      }
      if (informative) ++entry.groups_used;
      for (double r : totals) rewards.push_back(r);
      groups.push_back(std::move(g));
    }
    entry.success_rate = static_cast<double>(wins) / static_cast<double>(rewards.size());
    entry.mean_reward = compensated_sum(rewards) / static_cast<double>(rewards.size());
    result.log.push_back(entry);
    policy = grpo_update(policy, groups, cfg.clip, cfg.lr, cfg.weighting);
  }
  result.final = policy;
  result.after = evaluate_policy(tasks, policy, registry, grounder, cfg);
  return result;
}

nlohmann::json eval_json(const PolicyEval& e) {
  return {{"success_rate", e.success_rate},
          {"mean_reward", e.mean_reward},
          {"trajectories", e.trajectories},
          {"success_with_tools_fraction", e.success_with_tools_fraction()},
          {"tool_pattern", pattern_json(e.pattern)}};
}

nlohmann::json train_log_json(const TrainResult& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& e : r.log) {
    steps.push_back({{"step", e.step},
                     {"success_rate", e.success_rate},
                     {"mean_reward", e.mean_reward},
                     {"groups_used", e.groups_used},
                     {"tool_pattern", pattern_json(e.pattern)}});
  }
  return {{"before", eval_json(r.before)}, {"after", eval_json(r.after)}, {"steps", steps}};
}

}  // namespace hcua::learn
