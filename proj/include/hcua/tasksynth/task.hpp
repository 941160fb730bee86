#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hcua/verify/evaluator.hpp"
#include "hcua/world/world.hpp"

namespace hcua::tasksynth {

enum class Strategy { evaluator_first, instruction_first };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(std::string_view name);

struct DifficultyRecord {
  std::string task_id;
  std::size_t k = 0;
  std::size_t successes = 0;
  double score = 0.0;  // successes / k
  bool operator==(const DifficultyRecord&) const = default;
};

struct Task {
  std::string id;
  std::string instruction;
  world::App domain = world::App::files;
  world::WorkspaceManifest manifest;
  verify::EvaluatorConfig evaluator;
  Strategy strategy = Strategy::evaluator_first;
  std::optional<DifficultyRecord> difficulty;
  bool operator==(const Task&) const = default;
};

nlohmann::json task_to_json(const Task& task);
/// Throws GenerationError naming the missing or malformed field.
Task task_from_json(const nlohmann::json& doc);

}  // namespace hcua::tasksynth
