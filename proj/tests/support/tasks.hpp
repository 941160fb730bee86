#pragma once

// Hand-built tasks and trajectory replay for tests.

#include <string>
#include <vector>

#include "hcua/actionspace/action.hpp"
#include "hcua/core/errors.hpp"
#include "hcua/rollout/trajectory.hpp"
#include "hcua/tasksynth/fixtures.hpp"
#include "hcua/tasksynth/synth.hpp"

namespace testsupport {

inline hcua::tasksynth::Task make_task(const std::string& id, const hcua::verify::EvaluatorConfig& evaluator,
                                       hcua::world::App domain) {
  hcua::tasksynth::Task t;
  t.id = id;
  t.evaluator = evaluator;
  t.domain = domain;
  t.manifest = hcua::tasksynth::desk_fixture_manifest();
  t.instruction = hcua::tasksynth::phrase_config(evaluator).value();
  return t;
}

inline hcua::tasksynth::Task make_task(const std::string& id, const hcua::verify::AtomicEvaluator& leaf,
                                       hcua::world::App domain) {
  return make_task(id, hcua::verify::compose({leaf}, hcua::verify::Combinator::all), domain);
}

/// Actions of the recorded steps; malformed steps are skipped, as the episode
/// loop does.
inline std::vector<hcua::actionspace::Action> recorded_actions(const hcua::rollout::Trajectory& traj) {
  std::vector<hcua::actionspace::Action> out;
  for (const auto& step : traj.steps) {
    if (step.malformed) continue;
    out.push_back(hcua::actionspace::parse_step(step.raw_step).action);
  }
  return out;
}

inline hcua::world::WorldState replay(const hcua::world::WorldState& start,
                                      const std::vector<hcua::actionspace::Action>& actions,
                                      const hcua::toolforge::ToolRegistry& registry) {
  hcua::world::WorldState s = start;
  for (const auto& a : actions) s = hcua::actionspace::execute(s, a, registry).next_state;
  return s;
}

}  // namespace testsupport
