#include "hcua/learn/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hcua/core/hash.hpp"

namespace hcua::learn {

std::string_view template_name(StepTemplate t) {
  switch (t) {
    case StepTemplate::gui: return "gui";
    case StepTemplate::tool: return "tool";
    case StepTemplate::noise: return "noise";
    case StepTemplate::done: return "done";
  }
  return "gui";
}

std::string policy_key(world::App domain, bool started) {
  return std::string(world::app_name(domain)) + (started ? "/script" : "/start");
}

PolicyParams PolicyParams::initial(const Logits& logits, double temperature) {
  PolicyParams p;
  p.temperature = temperature;
  for (world::App app : world::kAllApps) {
    p.table[policy_key(app, false)] = logits;
    p.table[policy_key(app, true)] = logits;
  }
  return p;
}

std::array<double, kTemplateCount> PolicyParams::probs(const std::string& key) const {
  const Logits& z = table.at(key);
  const double top = *std::max_element(z.begin(), z.end());
  std::array<double, kTemplateCount> p{};
  double sum = 0.0;
  for (std::size_t i = 0; i < kTemplateCount; ++i) {
    p[i] = std::exp((z[i] - top) / temperature);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

nlohmann::json policy_to_json(const PolicyParams& p) {
  nlohmann::json table = nlohmann::json::object();
  for (const auto& [key, z] : p.table) table[key] = z;
  return {{"temperature", p.temperature}, {"templates", {"gui", "tool", "noise", "done"}}, {"table", table}};
}

PolicyParams policy_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("table") || !doc.at("table").is_object()) {
    throw std::invalid_argument("policy: missing table");
  }
  PolicyParams p;
  p.temperature = doc.value("temperature", 1.0);
  if (!(p.temperature > 0.0) || !std::isfinite(p.temperature)) {
    throw std::invalid_argument("policy: temperature must be positive");
  }
  for (const auto& [key, row] : doc.at("table").items()) {
    if (!row.is_array() || row.size() != kTemplateCount) {
      throw std::invalid_argument("policy: key " + key + " needs " + std::to_string(kTemplateCount) + " logits");
    }
    Logits z{};
    for (std::size_t i = 0; i < kTemplateCount; ++i) {
      if (!row[i].is_number() || !std::isfinite(row[i].get<double>())) {
        throw std::invalid_argument("policy: non-finite logit at key " + key);
      }
      z[i] = row[i].get<double>();
    }
    p.table[key] = z;
  }
  return p;
}

// ---------------------------------------------------------------------------

void PolicyPlanner::begin_episode(const tasksynth::Task& task, std::uint64_t seed) {
  task_ = task;
  rng_ = Rng(derive_seed(seed ^ fnv1a64(task.id), "policy"));
  built_ = false;
  leaves_.clear();
  leaf_ = 0;
  gui_pos_ = 0;
  progress_ = 0;
  decisions_.clear();
}

std::string PolicyPlanner::next_step(const rollout::Observation& obs, const rollout::Grounder& grounder) {
  if (!built_) {
    leaves_ = rollout::plan_leaves(task_.evaluator, obs.exposed_tools);
    built_ = true;
  }
  const std::size_t total = leaves_.size();
  if (leaf_ >= total) {
    return rollout::step_text(rollout::progress_memory(task_.instruction, total, total, "done"),
                              actionspace::Done{true});
  }
  const std::string key = policy_key(task_.domain, progress_ > 0);
  const auto p = params_->probs(key);
  const std::size_t choice = rng_.weighted(std::span<const double>(p.data(), p.size()));
  decisions_.push_back(StepDecision{key, choice, p[choice]});
  auto t = static_cast<StepTemplate>(choice);

  rollout::LeafPlan& leaf = leaves_[leaf_];
  if (t == StepTemplate::tool && !leaf.tool) t = StepTemplate::gui;
  actionspace::Action action = actionspace::Done{true};
  switch (t) {
    case StepTemplate::tool:
      action = *leaf.tool;
      ++leaf_;
      gui_pos_ = 0;
      ++progress_;
      break;
    case StepTemplate::gui:
      if (leaf.gui.empty()) {
        action = world::Click{0, 0};
      } else {
        action = rollout::ground(leaf.gui[gui_pos_++], obs, grounder);
      }
      if (gui_pos_ >= leaf.gui.size()) {
        ++leaf_;
        gui_pos_ = 0;
      }
      ++progress_;
      break;
    case StepTemplate::noise:
      action = rollout::random_action(obs, rng_);
      break;
    case StepTemplate::done:
      break;
  }
  return rollout::step_text(
      rollout::progress_memory(task_.instruction, leaf_, total, std::string(template_name(t))), action);
}

// ---------------------------------------------------------------------------

void ClipConfig::check() const {
  if (!(eps_low > 0.0) || !(eps_high >= eps_low) || !std::isfinite(eps_high)) {
    throw std::invalid_argument("clip: need 0 < eps_low <= eps_high");
  }
}

namespace {

struct Term {
  const StepDecision* decision;
  double weight;
};

/// Weighted decisions of all non-degenerate groups, already divided by the
/// normaliser.
std::vector<Term> terms(const std::vector<Group>& groups, StepWeighting weighting) {
  std::vector<Term> out;
  std::size_t trajectories = 0;
  std::size_t decisions = 0;
  for (const auto& g : groups) {
    if (std::all_of(g.begin(), g.end(), [](const SampledTrajectory& t) { return t.advantage == 0.0; })) continue;
    for (const auto& t : g) {
      ++trajectories;
      decisions += t.decisions.size();
      if (t.decisions.empty()) continue;
      if (t.length == 0) throw std::invalid_argument("grpo: trajectory with decisions but zero length");
      const double w = weighting == StepWeighting::per_step ? t.advantage / static_cast<double>(t.length)
                                                            : t.advantage;
      for (const auto& d : t.decisions) out.push_back(Term{&d, w});
    }
  }
  const std::size_t norm = weighting == StepWeighting::per_step ? trajectories : decisions;
  for (auto& term : out) term.weight /= static_cast<double>(norm);
  return out;
}

double clipped(double rho, const ClipConfig& cfg) { return std::clamp(rho, 1.0 - cfg.eps_low, 1.0 + cfg.eps_high); }

}  // namespace

double surrogate(const PolicyParams& policy, const std::vector<Group>& groups, const ClipConfig& cfg,
                 StepWeighting weighting) {
  cfg.check();
  double total = 0.0;
  for (const auto& [d, w] : terms(groups, weighting)) {
    const double rho = policy.probs(d->key)[d->choice] / d->old_prob;
    total += std::min(rho * w, clipped(rho, cfg) * w);
  }
  return total;
}

Gradient surrogate_gradient(const PolicyParams& policy, const std::vector<Group>& groups, const ClipConfig& cfg,
                            StepWeighting weighting) {
  cfg.check();
  Gradient grad;
  const double lo = 1.0 - cfg.eps_low;
  const double hi = 1.0 + cfg.eps_high;
  for (const auto& [d, w] : terms(groups, weighting)) {
    if (w == 0.0) continue;
    const auto p = policy.probs(d->key);
    const double rho = p[d->choice] / d->old_prob;
    // The unclipped branch is the minimum inside the range, and outside it on
    // the side where the ratio moves against the advantage. A non-finite ratio
    // is let through so the update reports it.
    const bool active =
        !std::isfinite(rho) || (rho >= lo && rho <= hi) || (w > 0.0 && rho < lo) || (w < 0.0 && rho > hi);
    if (!active) continue;
    Logits& g = grad.try_emplace(d->key, Logits{}).first->second;
    for (std::size_t j = 0; j < kTemplateCount; ++j) {
      const double indicator = j == d->choice ? 1.0 : 0.0;
      g[j] += w * rho * (indicator - p[j]) / policy.temperature;
    }
  }
  return grad;
}

PolicyParams grpo_update(const PolicyParams& policy, const std::vector<Group>& groups, const ClipConfig& cfg,
                         double lr, StepWeighting weighting) {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw std::invalid_argument("grpo_update: lr must be non-negative");
  const Gradient grad = surrogate_gradient(policy, groups, cfg, weighting);
  for (const auto& [key, g] : grad) {
    for (double v : g) {
      if (!std::isfinite(v)) throw std::domain_error("grpo_update: non-finite gradient at key " + key);
    }
  }
  PolicyParams next = policy;
  for (const auto& [key, g] : grad) {
    Logits& z = next.table.at(key);
    for (std::size_t j = 0; j < kTemplateCount; ++j) z[j] += lr * g[j];
  }
  return next;
}

}  // namespace hcua::learn
