#pragma once

// Batch commands behind the hcua binary. Each command reads its inputs,
// computes every output in memory and returns them; write_outputs puts them
// on disk in one go.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace hcua::cli {

/// Bad flags, presets or paths. The binary exits with status 2 on these.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::string corpus;        // input corpus (rollout, difficulty, train)
  std::string registry;      // tool catalog; empty means the built-in one
  std::string trajectories;  // input trajectories (export-sft)
  std::string policy;        // policy file for --planner policy; empty means the initial table
  std::string planner = "instruction";  // oracle | instruction | policy
  double epsilon = 0.1;
  std::size_t k = 8;
  std::string preset = "osworld-15";
  std::optional<std::size_t> max_steps;  // overrides the preset
  std::size_t tool_cap = 16;
  double band_lo = 0.4;
  double band_hi = 0.8;
  std::size_t rl_steps = 150;
  double lr = 2.0;
  double eps_low = 0.2;
  double eps_high = 0.28;
  double tool_bonus = 0.3;
  bool ablate_tool_reward = false;  // train a second run with tool_bonus 0
  std::string weighting = "per-step";  // per-step | loss-mean
  std::size_t n_evaluator_first = 500;
  std::size_t n_instruction_first = 300;
  std::size_t explore_depth = 8;
  std::string out = "out";
};

/// max_steps after applying the preset.
std::size_t resolved_max_steps(const RunConfig& cfg);

/// Throws UsageError for unknown presets, planners or weightings, values out
/// of range, and input paths the command needs but cannot read.
void validate(const RunConfig& cfg);

/// Every setting that can change an output, with input files replaced by the
/// digest of their bytes. The output directory is left out.
nlohmann::json config_json(const RunConfig& cfg);
std::string config_digest(const RunConfig& cfg);

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string content;
};
using Outputs = std::vector<OutputFile>;

/// Corpus from both strategies plus the per-strategy stats table.
Outputs cmd_synth(const RunConfig& cfg);
/// K trajectories per task and the metrics report.
Outputs cmd_rollout(const RunConfig& cfg);
/// Difficulty records of the configured planner and the band members.
Outputs cmd_difficulty(const RunConfig& cfg);
/// Band filtering, the RL loop, the final policy and a before/after report.
Outputs cmd_train(const RunConfig& cfg);
/// SFT samples from the successful trajectories of the input file.
Outputs cmd_export_sft(const RunConfig& cfg);
/// The tool catalog in effect, as a registry file.
Outputs cmd_tools(const RunConfig& cfg);

/// Dispatches on cfg.command after validate().
Outputs run_command(const RunConfig& cfg);

/// Writes each file to a temporary name in cfg.out, then renames them all.
void write_outputs(const Outputs& outputs, const std::string& dir);

}  // namespace hcua::cli
