#include <fstream>
#include <sstream>

#include "hcua/core/errors.hpp"
#include "hcua/rollout/trajectory.hpp"

namespace hcua::rollout {

using nlohmann::json;

json trajectory_to_json(const Trajectory& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"raw_step", s.raw_step},
                     {"malformed", s.malformed},
                     {"invalid", s.invalid},
                     {"tool_error", s.tool_error ? json(*s.tool_error) : json(nullptr)},
                     {"effect_log", s.effect_log},
                     {"observation_digest", s.observation_digest},
                     {"memory_truncated", s.memory_truncated}});
  }
  return {{"task_id", t.task_id}, {"seed", t.seed},     {"instruction", t.instruction},
          {"steps", steps},       {"success", t.success}, {"used_tool_call", t.used_tool_call},
          {"length", t.length}};
}

namespace {

template <typename T>
T field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

Trajectory trajectory_from_json(const json& doc) {
  Trajectory t;
  t.task_id = field<std::string>(doc, "task_id");
  t.seed = field<std::uint64_t>(doc, "seed");
  t.instruction = field<std::string>(doc, "instruction");
  const json steps = field<json>(doc, "steps");
  if (!steps.is_array()) throw std::invalid_argument("field 'steps' must be an array");
  for (const auto& s : steps) {
    StepRecord r;
    r.raw_step = field<std::string>(s, "raw_step");
    r.malformed = field<bool>(s, "malformed");
    r.invalid = field<bool>(s, "invalid");
    const json err = field<json>(s, "tool_error");
    if (!err.is_null()) r.tool_error = field<std::string>(s, "tool_error");
    r.effect_log = field<std::string>(s, "effect_log");
    r.observation_digest = field<std::string>(s, "observation_digest");
    r.memory_truncated = field<bool>(s, "memory_truncated");
    t.steps.push_back(std::move(r));
  }
  t.success = field<bool>(doc, "success");
  t.used_tool_call = field<bool>(doc, "used_tool_call");
  t.length = field<std::size_t>(doc, "length");
  if (t.length != t.steps.size()) throw std::invalid_argument("length does not match the step count");
  return t;
}

std::string trajectories_to_jsonl(const std::vector<Trajectory>& trajs) {
  std::string out;
  for (const auto& t : trajs) out += trajectory_to_json(t).dump() + "\n";
  return out;
}

std::vector<Trajectory> trajectories_from_jsonl(const std::string& text) {
  std::vector<Trajectory> out;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      out.push_back(trajectory_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw LoadError(number, std::string("corrupt record: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw LoadError(number, e.what());
    }
  }
  return out;
}

void persist(const std::vector<Trajectory>& trajs, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << trajectories_to_jsonl(trajs);
  if (!f) throw std::runtime_error("write failed for " + path);
}

std::vector<Trajectory> load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return trajectories_from_jsonl(buf.str());
}

}  // namespace hcua::rollout
