#include <cstdio>
#include <stdexcept>

#include "hcua/actionspace/action.hpp"
#include "hcua/core/errors.hpp"
#include "hcua/core/hash.hpp"
#include "hcua/rollout/episode.hpp"
#include "hcua/verify/evaluator.hpp"

namespace hcua::rollout {

std::string observation_text(const Observation& obs) {
  std::string out = "Instruction: " + obs.instruction + "\n";
  out += "Step: " + std::to_string(obs.step_index) + "\n";
  out += "Last effect: " + obs.last_effect + "\n";
  out += "Memory:\n" + obs.memory + "\n";
  out += "Tools:\n";
  for (const auto* t : obs.exposed_tools) out += "- " + toolforge::signature(*t) + ": " + t->doc + "\n";
  out += "Screen:\n" + world::screen_text(obs.screen);
  return out;
}

std::string observation_digest(const Observation& obs) { return hex64(fnv1a64(observation_text(obs))); }

std::optional<std::pair<int, int>> ReferenceGrounder::locate(const world::Screen& screen,
                                                             std::string_view description) const {
  // Elements are already ordered by (y0, x0, id), so the first hit wins ties.
  for (const auto& e : screen.elements) {
    if (e.label == description) return e.bbox.center();
  }
  if (description.empty()) return std::nullopt;
  for (const auto& e : screen.elements) {
    if (e.label.find(description) != std::string::npos) return e.bbox.center();
  }
  return std::nullopt;
}

std::pair<std::string, bool> cap_memory(std::string memory, std::size_t cap) {
  if (memory.size() <= cap) return {std::move(memory), false};
  while (memory.size() > cap) {
    const std::size_t nl = memory.find('\n');
    if (nl == std::string::npos) {
      memory.erase(0, memory.size() - cap);
      break;
    }
    memory.erase(0, nl + 1);
  }
  return {std::move(memory), true};
}

bool label(const world::WorldState& final_state, const tasksynth::Task& task) {
  return verify::evaluate(final_state, task.evaluator);
}

Trajectory run_episode(const tasksynth::Task& task, Planner& planner, const Grounder& grounder,
                       const toolforge::ToolRegistry& registry, const EpisodeConfig& cfg, std::uint64_t seed,
                       world::WorldState* final_state) {
  if (cfg.max_steps == 0) throw std::invalid_argument("run_episode: max_steps must be at least 1");
  world::WorldState state = world::reset(seed, task.manifest);

  // Only exposed tools can be called; with cap 0 the episode is GUI-only.
  Observation obs;
  obs.instruction = task.instruction;
  const auto exposed = toolforge::expose(registry, task.domain, cfg.tool_cap);
  toolforge::ToolRegistry episode_tools;
  for (const auto* spec : exposed) episode_tools.add(*spec);
  for (const auto* spec : exposed) obs.exposed_tools.push_back(episode_tools.find(spec->name));

  Trajectory traj;
  traj.task_id = task.id;
  traj.seed = seed;
  traj.instruction = task.instruction;
  planner.begin_episode(task, seed);
  for (std::size_t step = 0; step < cfg.max_steps; ++step) {
    obs.screen = world::render(state);
    obs.step_index = step;
    StepRecord rec;
    rec.observation_digest = observation_digest(obs);
    rec.raw_step = planner.next_step(obs, grounder);

    actionspace::ParsedStep parsed;
    try {
      parsed = actionspace::parse_step(rec.raw_step);
    } catch (const ParseError& e) {
      rec.malformed = true;
      rec.effect_log = std::string("malformed: ") + e.what();
      obs.last_effect = rec.effect_log;
      traj.steps.push_back(std::move(rec));
      continue;
    }
    if (parsed.memory) {
      auto [memory, truncated] = cap_memory(*parsed.memory, cfg.memory_cap);
      obs.memory = std::move(memory);
      rec.memory_truncated = truncated;
    }
    world::StepOutcome out = actionspace::execute(state, parsed.action, episode_tools);
    rec.invalid = out.invalid;
    rec.tool_error = out.tool_error;
    rec.effect_log = out.effect_log;
    obs.last_effect = out.effect_log;
    state = std::move(out.next_state);
    if (actionspace::is_tool_call(parsed.action)) traj.used_tool_call = true;
    traj.steps.push_back(std::move(rec));
    if (std::holds_alternative<actionspace::Done>(parsed.action)) break;
  }
  traj.length = traj.steps.size();
  traj.success = label(state, task);
  if (final_state != nullptr) *final_state = std::move(state);
  return traj;
}

std::vector<Trajectory> run_batch(const tasksynth::Task& task, Planner& planner, const Grounder& grounder,
                                  const toolforge::ToolRegistry& registry, const EpisodeConfig& cfg, std::size_t k,
                                  std::uint64_t base_seed) {
  if (k == 0) throw std::invalid_argument("run_batch: k must be at least 1");
  std::vector<Trajectory> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(run_episode(task, planner, grounder, registry, cfg, base_seed + i));
  return out;
}

// ---------------------------------------------------------------------------

MetricsReport metrics(const std::map<std::string, std::vector<Trajectory>>& trajs_by_task) {
  MetricsReport r;
  double sr_sum = 0.0;
  std::size_t pass = 0;
  std::size_t successes = 0;
  double success_steps = 0.0;
  for (const auto& [task_id, trajs] : trajs_by_task) {
    if (trajs.empty()) throw std::invalid_argument("metrics: task " + task_id + " has no trajectories");
    ++r.task_count;
    std::size_t task_successes = 0;
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      const Trajectory& t = trajs[i];
      ++r.trajectory_count;
      if (t.success) {
        ++task_successes;
        ++successes;
        success_steps += static_cast<double>(t.length);
      }
      auto& p = r.tool_pattern;
      if (t.success) ++(t.used_tool_call ? p.success_with_tools : p.success_without_tools);
      else ++(t.used_tool_call ? p.fail_with_tools : p.fail_without_tools);
      for (const auto& s : t.steps) {
        if (s.malformed) ++r.malformed_steps;
        if (s.tool_error) ++r.tool_errors;
      }
    }
    sr_sum += static_cast<double>(task_successes) / static_cast<double>(trajs.size());
    bool any = false;
    for (std::size_t i = 0; i < trajs.size() && i < 4; ++i) any = any || trajs[i].success;
    if (any) ++pass;
    if (trajs.size() < 4) r.pass_at_4_short.push_back(task_id);
  }
  if (r.task_count > 0) {
    r.success_rate = sr_sum / static_cast<double>(r.task_count);
    r.pass_at_4 = static_cast<double>(pass) / static_cast<double>(r.task_count);
  }
  if (successes > 0) r.avg_steps = success_steps / static_cast<double>(successes);
  return r;
}

std::string metrics_text(const MetricsReport& r) {
  char buf[256];
  std::string out;
  auto line = [&](const char* name, const std::string& value) {
    std::snprintf(buf, sizeof buf, "%-22s %s\n", name, value.c_str());
    out += buf;
  };
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  line("tasks", std::to_string(r.task_count));
  line("trajectories", std::to_string(r.trajectory_count));
  line("success_rate", num(r.success_rate));
  line("pass@4", num(r.pass_at_4) + (r.pass_at_4_short.empty()
                                         ? ""
                                         : " (" + std::to_string(r.pass_at_4_short.size()) +
                                               " tasks with fewer than 4 trajectories)"));
  line("avg_steps", r.avg_steps ? num(*r.avg_steps) : std::string("absent"));
  line("malformed_steps", std::to_string(r.malformed_steps));
  line("tool_errors", std::to_string(r.tool_errors));
  out += "tool-call pattern      with_tools  without_tools\n";
  std::snprintf(buf, sizeof buf, "  %-20s %10zu %14zu\n  %-20s %10zu %14zu\n", "success",
                r.tool_pattern.success_with_tools, r.tool_pattern.success_without_tools, "fail",
                r.tool_pattern.fail_with_tools, r.tool_pattern.fail_without_tools);
  out += buf;
  return out;
}

nlohmann::json metrics_json(const MetricsReport& r) {
  return {{"task_count", r.task_count},
          {"trajectory_count", r.trajectory_count},
          {"success_rate", r.success_rate},
          {"pass_at_4", r.pass_at_4},
          {"pass_at_4_short", r.pass_at_4_short},
          {"avg_steps", r.avg_steps ? nlohmann::json(*r.avg_steps) : nlohmann::json()},
          {"tool_pattern",
           {{"success_with_tools", r.tool_pattern.success_with_tools},
            {"success_without_tools", r.tool_pattern.success_without_tools},
            {"fail_with_tools", r.tool_pattern.fail_with_tools},
            {"fail_without_tools", r.tool_pattern.fail_without_tools}}},
          {"malformed_steps", r.malformed_steps},
          {"tool_errors", r.tool_errors}};
}

}  // namespace hcua::rollout
