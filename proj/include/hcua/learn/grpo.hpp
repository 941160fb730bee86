#pragma once

// Tabular softmax policy over step templates, the planner that samples from
// it, and the clipped GRPO surrogate with its analytic gradient.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcua/rollout/planners.hpp"

namespace hcua::learn {

/// Step templates the policy chooses between at each decision.
enum class StepTemplate { gui, tool, noise, done };
inline constexpr std::size_t kTemplateCount = 4;
std::string_view template_name(StepTemplate t);

using Logits = std::array<double, kTemplateCount>;

/// Decision buckets: before any leaf progress, or part-way through the plan.
std::string policy_key(world::App domain, bool started);

/// Logits shared by every key of a fresh policy: GUI and tool equally likely,
/// noise sizeable and done rare, so that early rollouts fail often enough to
/// leave something to learn.
inline constexpr Logits kInitialLogits = {0.0, 0.0, -0.3, -2.0};

struct PolicyParams {
  std::map<std::string, Logits> table;  // every (domain, bucket) key
  double temperature = 1.0;

  static PolicyParams initial(const Logits& logits = kInitialLogits, double temperature = 1.0);
  /// Softmax of logits / temperature. Throws std::out_of_range for unknown keys.
  std::array<double, kTemplateCount> probs(const std::string& key) const;
  bool operator==(const PolicyParams&) const = default;
};

nlohmann::json policy_to_json(const PolicyParams& p);
/// Throws std::invalid_argument for bad shapes or non-finite logits.
PolicyParams policy_from_json(const nlohmann::json& doc);

struct StepDecision {
  std::string key;
  std::size_t choice = 0;  // StepTemplate index
  double old_prob = 0.0;   // probability at sampling time
  bool operator==(const StepDecision&) const = default;
};

/// Follows the oracle plan, but each step samples a template: gui advances the
/// GUI script of the current leaf, tool solves the leaf with its tool call (or
/// falls back to gui), noise inserts a random action without advancing, done
/// ends the episode. Once every leaf is handled it emits done without a
/// decision.
class PolicyPlanner : public rollout::Planner {
 public:
  explicit PolicyPlanner(const PolicyParams& params) : params_(&params) {}
  void begin_episode(const tasksynth::Task& task, std::uint64_t seed) override;
  std::string next_step(const rollout::Observation& obs, const rollout::Grounder& grounder) override;
  const std::vector<StepDecision>& decisions() const { return decisions_; }

 private:
  const PolicyParams* params_;
  tasksynth::Task task_;
  Rng rng_{0};
  bool built_ = false;
  std::vector<rollout::LeafPlan> leaves_;
  std::size_t leaf_ = 0;
  std::size_t gui_pos_ = 0;
  std::size_t progress_ = 0;
  std::vector<StepDecision> decisions_;
};

struct ClipConfig {
  double eps_low = 0.2;
  double eps_high = 0.28;
  /// No KL term is ever applied.
  static constexpr double kl_coeff = 0.0;
  /// Throws std::invalid_argument unless 0 < eps_low <= eps_high.
  void check() const;
};

/// How the trajectory advantage is spread over its steps.
enum class StepWeighting {
  per_step,   // A / length per decision, summed and divided by trajectory count
  loss_mean,  // A per decision, divided by the total decision count
};

struct SampledTrajectory {
  std::vector<StepDecision> decisions;
  std::size_t length = 0;
  double advantage = 0.0;
};

using Group = std::vector<SampledTrajectory>;

/// Clipped surrogate; zero-variance groups (all advantages zero) are skipped
/// and do not count towards the normaliser.
double surrogate(const PolicyParams& policy, const std::vector<Group>& groups, const ClipConfig& cfg,
                 StepWeighting weighting = StepWeighting::per_step);

using Gradient = std::map<std::string, Logits>;

Gradient surrogate_gradient(const PolicyParams& policy, const std::vector<Group>& groups, const ClipConfig& cfg,
                            StepWeighting weighting = StepWeighting::per_step);

/// One ascent step of size lr. Throws std::domain_error naming the key of a
/// non-finite gradient entry.
PolicyParams grpo_update(const PolicyParams& policy, const std::vector<Group>& groups, const ClipConfig& cfg,
                         double lr, StepWeighting weighting = StepWeighting::per_step);

}  // namespace hcua::learn
