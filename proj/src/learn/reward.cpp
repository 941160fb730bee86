#include "hcua/learn/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hcua::learn {

RewardRecord reward(const rollout::Trajectory& traj, double tool_bonus) {
  RewardRecord r;
  r.r_env = traj.success ? 1.0 : -1.0;
  r.r_tool = traj.success && traj.used_tool_call ? tool_bonus : 0.0;
  r.total = r.r_env + r.r_tool;
  return r;
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) c += (sum - t) + v;
    else c += (v - t) + sum;
    sum = t;
  }
  return sum + c;
}

std::vector<double> propagate(const RewardRecord& rec, const rollout::Trajectory& traj) {
  if (traj.steps.empty()) throw std::invalid_argument("propagate: trajectory has no steps");
  const std::size_t n = traj.steps.size();
  std::vector<double> out(n, rec.total / static_cast<double>(n));
  for (int round = 0; round < 4; ++round) {
    const double missing = rec.total - compensated_sum(out);
    if (missing == 0.0) return out;
    out.back() += missing;
  }
  // A residual below the last share's ulp: walk it one ulp at a time. The
  // compensated sum is monotone in the last value and each ulp of a share is
  // finer than an ulp of the total, so this lands exactly.
  for (int i = 0; i < 1 << 16; ++i) {
    const double sum = compensated_sum(out);
    if (sum == rec.total) return out;
    out.back() = std::nextafter(out.back(), sum < rec.total ? HUGE_VAL : -HUGE_VAL);
  }
  throw std::logic_error("propagate: could not conserve the total");
}

DifficultyRecord difficulty_from(const std::string& task_id, std::span<const rollout::Trajectory> trajs) {
  if (trajs.empty()) throw std::invalid_argument("difficulty: no trajectories for " + task_id);
  DifficultyRecord d;
  d.task_id = task_id;
  d.k = trajs.size();
  d.successes = static_cast<std::size_t>(std::count_if(trajs.begin(), trajs.end(), [](const auto& t) { return t.success; }));
  d.score = static_cast<double>(d.successes) / static_cast<double>(d.k);
  return d;
}

DifficultyRecord difficulty(const tasksynth::Task& task, rollout::Planner& planner, const rollout::Grounder& grounder,
                            const toolforge::ToolRegistry& registry, const rollout::EpisodeConfig& cfg, std::size_t k,
                            std::uint64_t base_seed) {
  const auto trajs = rollout::run_batch(task, planner, grounder, registry, cfg, k, base_seed);
  return difficulty_from(task.id, trajs);
}

std::vector<std::string> filter_band(std::span<const DifficultyRecord> records, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("filter_band: lo must not exceed hi");
  std::vector<std::string> out;
  for (const auto& r : records) {
    if (r.score >= lo && r.score <= hi) out.push_back(r.task_id);
  }
  std::stable_sort(out.begin(), out.end());
  return out;
}

std::vector<double> group_advantages(std::span<const double> totals) {
  if (totals.size() < 2) throw std::invalid_argument("group_advantages: group needs at least two totals");
  const double n = static_cast<double>(totals.size());
  const double mean = compensated_sum(totals) / n;
  std::vector<double> dev(totals.size());
  std::vector<double> sq(totals.size());
  for (std::size_t i = 0; i < totals.size(); ++i) {
    dev[i] = totals[i] - mean;
    sq[i] = dev[i] * dev[i];
  }
  const double sd = std::sqrt(compensated_sum(sq) / n);
  if (!(sd > kAdvantageDelta)) return std::vector<double>(totals.size(), 0.0);
  for (double& d : dev) d /= sd;
  return dev;
}

}  // namespace hcua::learn
