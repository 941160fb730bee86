#include "hcua/tasksynth/task.hpp"

#include "hcua/core/errors.hpp"

namespace hcua::tasksynth {

using nlohmann::json;

std::string_view strategy_name(Strategy s) {
  return s == Strategy::evaluator_first ? "evaluator_first" : "instruction_first";
}

std::optional<Strategy> strategy_from_name(std::string_view name) {
  if (name == "evaluator_first") return Strategy::evaluator_first;
  if (name == "instruction_first") return Strategy::instruction_first;
  return std::nullopt;
}

json task_to_json(const Task& task) {
  json out = {{"id", task.id},
              {"instruction", task.instruction},
              {"domain", world::app_name(task.domain)},
              {"manifest", world::manifest_to_json(task.manifest)},
              {"evaluator", verify::config_to_json(task.evaluator)},
              {"strategy", strategy_name(task.strategy)}};
  if (task.difficulty) {
    out["difficulty"] = {{"task_id", task.difficulty->task_id},
                         {"k", task.difficulty->k},
                         {"successes", task.difficulty->successes},
                         {"score", task.difficulty->score}};
  }
  return out;
}

namespace {

const json& member(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw GenerationError(std::string("task: missing field '") + key + "'");
  return doc.at(key);
}

std::string text(const json& doc, const char* key) {
  const json& v = member(doc, key);
  if (!v.is_string()) throw GenerationError(std::string("task: field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

Task task_from_json(const json& doc) {
  Task t;
  t.id = text(doc, "id");
  t.instruction = text(doc, "instruction");
  if (t.id.empty() || t.instruction.empty()) throw GenerationError("task: id and instruction must be non-empty");
  auto app = world::app_from_name(text(doc, "domain"));
  if (!app) throw GenerationError("task " + t.id + ": unknown domain");
  t.domain = *app;
  auto strategy = strategy_from_name(text(doc, "strategy"));
  if (!strategy) throw GenerationError("task " + t.id + ": unknown strategy");
  t.strategy = *strategy;
  try {
    t.manifest = world::manifest_from_json(member(doc, "manifest"));
    t.evaluator = verify::config_from_json(member(doc, "evaluator"));
  } catch (const ManifestError& e) {
    throw GenerationError("task " + t.id + ": " + e.what());
  } catch (const EvaluatorError& e) {
    throw GenerationError("task " + t.id + ": " + e.what());
  }
  if (doc.contains("difficulty")) {
    const json& d = doc.at("difficulty");
    try {
      t.difficulty = DifficultyRecord{d.at("task_id").get<std::string>(), d.at("k").get<std::size_t>(),
                                      d.at("successes").get<std::size_t>(), d.at("score").get<double>()};
    } catch (const json::exception&) {
      throw GenerationError("task " + t.id + ": malformed difficulty record");
    }
  }
  return t;
}

}  // namespace hcua::tasksynth
