#pragma once

// Tool mining from recorded trajectories and replay validation.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcua/core/scalar.hpp"
#include "hcua/rollout/trajectory.hpp"
#include "hcua/toolforge/tool.hpp"
#include "hcua/verify/evaluator.hpp"
#include "hcua/world/world.hpp"

namespace hcua::toolforge {

struct MinedCandidate {
  ToolSpec spec;                       // source == mined
  std::map<std::string, Scalar> args;  // values that reproduce the source run
  std::size_t first_step = 0;          // source run, inclusive step indices
  std::size_t last_step = 0;
};

/// Splits the trajectory into maximal runs of grounding-free steps (key,
/// type, tool call), cuts each run after every state-changing step, and keeps
/// segments of length >= 2 that end in such a step and contain at least one
/// literal from the instruction. Tool calls are inlined when the registry
/// knows them; otherwise they break the run.
std::vector<MinedCandidate> mine_from_trajectory(const rollout::Trajectory& traj,
                                                 const ToolRegistry* registry = nullptr);

struct ValidationFixture {
  world::WorldState state;
  std::map<std::string, Scalar> args;
  verify::EvaluatorConfig expect;
};

struct FixtureResult {
  bool passed = false;
  bool rolled_back = false;  // a failed tool left the state unchanged
  std::size_t coordinate_transitions = 0;
  std::string detail;
};

struct ValidationReport {
  std::optional<std::string> structural_error;  // set when nothing was replayed
  std::vector<FixtureResult> results;
  /// Registerable as mined only when every fixture passed.
  bool all_passed() const;
};

/// Throws std::invalid_argument when fixtures is empty.
ValidationReport validate(const ToolSpec& spec, const std::vector<ValidationFixture>& fixtures);

}  // namespace hcua::toolforge
