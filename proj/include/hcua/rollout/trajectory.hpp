#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hcua::rollout {

struct StepRecord {
  std::string raw_step;             // planner emission, verbatim
  bool malformed = false;           // raw_step failed to parse; nothing was executed
  bool invalid = false;
  std::optional<std::string> tool_error;
  std::string effect_log;
  std::string observation_digest;   // hex digest of the observation the planner saw
  bool memory_truncated = false;
  bool operator==(const StepRecord&) const = default;
};

struct Trajectory {
  std::string task_id;
  std::uint64_t seed = 0;
  std::string instruction;
  std::vector<StepRecord> steps;
  bool success = false;
  bool used_tool_call = false;
  std::size_t length = 0;
  bool operator==(const Trajectory&) const = default;
};

nlohmann::json trajectory_to_json(const Trajectory& t);
/// Throws std::invalid_argument describing the first bad field.
Trajectory trajectory_from_json(const nlohmann::json& doc);

/// One compact JSON record per line; an empty list gives an empty string.
std::string trajectories_to_jsonl(const std::vector<Trajectory>& trajs);
/// Throws LoadError with the 1-based line number of the first bad record.
std::vector<Trajectory> trajectories_from_jsonl(const std::string& text);

void persist(const std::vector<Trajectory>& trajs, const std::string& path);
std::vector<Trajectory> load(const std::string& path);

}  // namespace hcua::rollout
