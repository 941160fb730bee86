#include "hcua/rollout/planners.hpp"

#include <array>
#include <stdexcept>

#include "hcua/core/errors.hpp"
#include "hcua/core/hash.hpp"
#include "hcua/tasksynth/synth.hpp"

namespace hcua::rollout {

namespace {

using verify::AtomicEvaluator;
using verify::AtomicKind;
using Kind = ScriptStep::Kind;

const std::string& param(const AtomicEvaluator& a, const std::string& name) {
  return std::get<std::string>(a.params.at(name));
}

ScriptStep click(std::string what) { return {Kind::click, std::move(what)}; }
ScriptStep key(std::string combo) { return {Kind::key, std::move(combo)}; }
ScriptStep type(std::string text) { return {Kind::type, std::move(text)}; }

bool looks_like_file(const std::string& path) { return world::base_name(path).find('.') != std::string::npos; }

actionspace::ToolCall call(std::string name, std::map<std::string, Scalar> args) {
  return actionspace::ToolCall{std::move(name), std::move(args)};
}

}  // namespace

std::string describe(const ScriptStep& step) {
  const std::string quoted = nlohmann::json(step.text).dump();
  switch (step.kind) {
    case Kind::click: return "click " + quoted;
    case Kind::key: return "key " + step.text;
    case Kind::type: return "type " + quoted;
  }
  return {};
}

std::vector<AtomicEvaluator> goal_leaves(const verify::EvaluatorConfig& cfg) {
  using Node = verify::EvaluatorConfig::Node;
  if (cfg.node == Node::atomic) return {cfg.atomic};
  std::vector<AtomicEvaluator> out;
  if (cfg.node == Node::any) return cfg.children.empty() ? out : goal_leaves(cfg.children.front());
  for (const auto& child : cfg.children) {
    for (auto& leaf : goal_leaves(child)) out.push_back(std::move(leaf));
  }
  return out;
}

std::vector<ScriptStep> gui_script(const AtomicEvaluator& leaf) {
  switch (leaf.kind) {
    case AtomicKind::file_exists: {
      const std::string& path = param(leaf, "path");
      return {key("alt+1"), click("Name"), type(path), click(looks_like_file(path) ? "New File" : "New Folder")};
    }
    case AtomicKind::file_content_equals:
      return {key("ctrl+o"), type(param(leaf, "path")), key("enter"), type(param(leaf, "content")), key("ctrl+s")};
    case AtomicKind::url_equals:
      return {key("ctrl+l"), type(param(leaf, "url")), key("enter")};
    case AtomicKind::setting_equals: {
      const std::string& app = param(leaf, "app");
      const std::string& k = param(leaf, "key");
      const std::string& value = param(leaf, "value");
      if (app == "editor" && k == "theme") return {key("ctrl+k"), key("ctrl+t"), type(value), key("enter")};
      if (app == "keybindings") return {key("ctrl+k"), key("ctrl+s"), type(k + "=" + value), key("enter")};
      return {key("alt+5"), click(app + "." + k), type(value)};
    }
    case AtomicKind::cell_value_equals:
      return {key("alt+4"), click(param(leaf, "cell")), type(scalar_text(leaf.params.at("value")))};
    case AtomicKind::clipboard_equals: {
      const std::string& text = param(leaf, "text");
      if (!world::is_normalized_path(text) || text == "/") return {};
      return {key("alt+1"), click("Location"), type(world::parent_path(text)), key("enter"),
              click(world::base_name(text)), click("Copy Path")};
    }
    case AtomicKind::bookmark_exists: {
      const std::string& name = param(leaf, "name");
      const std::string& folder = param(leaf, "folder");
      if (folder == world::kDefaultBookmarkFolder) return {key("ctrl+shift+o"), type(name), key("enter")};
      return {key("alt+2"), click("Bookmark name"), type(name), click("Bookmark folder"), type(folder),
              click("Add Bookmark")};
    }
  }
  return {};
}

std::optional<actionspace::ToolCall> tool_script(const AtomicEvaluator& leaf,
                                                 std::span<const toolforge::ToolSpec* const> exposed) {
  auto has = [&](std::string_view name) {
    for (const auto* t : exposed) {
      if (t->name == name) return true;
    }
    return false;
  };
  auto first = [&](std::initializer_list<std::pair<const char*, std::map<std::string, Scalar>>> options)
      -> std::optional<actionspace::ToolCall> {
    for (const auto& [name, args] : options) {
      if (has(name)) return call(name, args);
    }
    return std::nullopt;
  };
  switch (leaf.kind) {
    case AtomicKind::file_exists: {
      const std::string& path = param(leaf, "path");
      if (looks_like_file(path)) return first({{"system.create_file", {{"path", path}}}});
      return first({{"system.create_folder", {{"path", path}}}});
    }
    case AtomicKind::file_content_equals: {
      const std::string& path = param(leaf, "path");
      const std::string& content = param(leaf, "content");
      return first({{"system.create_file", {{"path", path}, {"content", content}}},
                    {"editor.write_file", {{"path", path}, {"content", content}}}});
    }
    case AtomicKind::url_equals:
      return first({{"chrome.open_url", {{"url", param(leaf, "url")}}}});
    case AtomicKind::setting_equals: {
      const std::string& app = param(leaf, "app");
      const std::string& k = param(leaf, "key");
      const std::string& value = param(leaf, "value");
      std::optional<actionspace::ToolCall> specific;
      if (app == "editor" && k == "theme") specific = first({{"vscode.set_theme", {{"theme", value}}}});
      else if (app == "keybindings") specific = first({{"vscode.add_keybinding", {{"key", k}, {"command", value}}}});
      else if (app == "writer" && k == "default_font") specific = first({{"writer.set_default_font", {{"font", value}}}});
      else if (app == "desktop" && k == "wallpaper") specific = first({{"os.set_wallpaper", {{"path", value}}}});
      else if (app == "system" && k == "timezone") specific = first({{"os.set_timezone", {{"zone", value}}}});
      else if (app == "desktop" && k == "dark_mode" && (value == "true" || value == "false")) {
        specific = first({{"os.set_dark_mode", {{"enabled", value == "true"}}}});
      }
      if (specific) return specific;
      return first({{"settings.set_value", {{"app", app}, {"key", k}, {"value", value}}}});
    }
    case AtomicKind::cell_value_equals: {
      const std::string& ref = param(leaf, "cell");
      const Scalar& value = leaf.params.at("value");
      const std::string cells = nlohmann::json{{ref, scalar_to_json(value)}}.dump();
      return first({{"set_cell_values", {{"cells", cells}, {"sheet", "Sheet1"}}},
                    {"calc.set_cell_value", {{"cell", ref}, {"value", scalar_text(value)}}}});
    }
    case AtomicKind::clipboard_equals:
      return first({{"system.copy_text_to_clipboard", {{"text", param(leaf, "text")}}}});
    case AtomicKind::bookmark_exists: {
      const std::string& name = param(leaf, "name");
      const std::string& folder = param(leaf, "folder");
      if (folder == world::kDefaultBookmarkFolder) {
        if (auto c = first({{"chrome.create_bookmark_folder", {{"name", name}}}})) return c;
      }
      return first({{"chrome.add_bookmark", {{"name", name}, {"url", "about:blank"}, {"folder", folder}}}});
    }
  }
  return std::nullopt;
}

std::vector<LeafPlan> plan_leaves(const verify::EvaluatorConfig& goals,
                                  std::span<const toolforge::ToolSpec* const> exposed) {
  std::vector<LeafPlan> out;
  for (auto& leaf : goal_leaves(goals)) {
    LeafPlan p;
    p.gui = gui_script(leaf);
    p.tool = tool_script(leaf, exposed);
    p.goal = std::move(leaf);
    out.push_back(std::move(p));
  }
  return out;
}

actionspace::Action ground(const ScriptStep& step, const Observation& obs, const Grounder& grounder) {
  switch (step.kind) {
    case Kind::key: return world::KeyPress{step.text};
    case Kind::type: return world::TypeText{step.text};
    case Kind::click: break;
  }
  if (auto point = grounder.locate(obs.screen, step.text)) return world::Click{point->first, point->second};
  return world::Click{0, 0};
}

std::string step_text(const std::string& memory, const actionspace::Action& action) {
  return actionspace::serialize_step(actionspace::ParsedStep{memory, action, {}});
}

std::string progress_memory(const std::string& instruction, std::size_t done, std::size_t total,
                            const std::string& next) {
  return "Task: " + instruction + "\nProgress: " + std::to_string(done) + "/" + std::to_string(total) +
         " steps done\nNext: " + next;
}

actionspace::Action random_action(const Observation& obs, Rng& rng) {
  static const std::array<const char*, 13> kKeys = {"escape", "enter", "backspace", "delete", "alt+1",
                                                     "alt+2",  "alt+3", "alt+4",     "alt+5",  "ctrl+s",
                                                     "alt+up", "ctrl+d", "alt+left"};
  std::vector<const world::ScreenElement*> enabled;
  for (const auto& e : obs.screen.elements) {
    if (!e.state_flags.disabled) enabled.push_back(&e);
  }
  const double u = rng.uniform();
  if (u >= 0.6 && u < 0.85) return world::KeyPress{kKeys[rng.below(kKeys.size())]};
  if (u >= 0.85 && !obs.exposed_tools.empty()) {
    const toolforge::ToolSpec& spec = *obs.exposed_tools[rng.below(obs.exposed_tools.size())];
    actionspace::ToolCall c{spec.name, {}};
    for (const auto& p : spec.params) {
      switch (p.type) {
        case ScalarType::boolean: c.args[p.name] = rng.chance(0.5); break;
        case ScalarType::integer: c.args[p.name] = std::int64_t{1}; break;
        case ScalarType::floating: c.args[p.name] = 1.0; break;
        case ScalarType::string:
          c.args[p.name] = p.name == "path" ? std::string(world::kHomeDir) + "/scratch.txt"
                           : p.name == "url" ? std::string("https://example.com/")
                                             : std::string("scratch");
          break;
      }
    }
    return c;
  }
  if (enabled.empty()) return world::KeyPress{"escape"};
  const auto [x, y] = enabled[rng.below(enabled.size())]->bbox.center();
  return world::Click{x, y};
}

// ---------------------------------------------------------------------------

void ScriptedPlanner::begin_episode(const tasksynth::Task& task, std::uint64_t) {
  task_ = task;
  built_ = false;
  give_up_ = false;
  moves_.clear();
  cursor_ = 0;
}

void ScriptedPlanner::build(const Observation& obs) {
  built_ = true;
  const auto cfg = goals(task_);
  if (!cfg) {
    give_up_ = true;
    return;
  }
  for (auto& leaf : plan_leaves(*cfg, obs.exposed_tools)) {
    if (leaf.tool) {
      moves_.push_back(Move{std::nullopt, std::move(leaf.tool)});
      continue;
    }
    for (auto& s : leaf.gui) moves_.push_back(Move{std::move(s), std::nullopt});
  }
}

std::string ScriptedPlanner::next_step(const Observation& obs, const Grounder& grounder) {
  if (!built_) build(obs);
  if (give_up_) {
    return step_text("Task: " + task_.instruction + "\nThe instruction names no goal I can reach.",
                     actionspace::Done{false});
  }
  const std::size_t total = moves_.size();
  if (cursor_ >= total) return step_text(progress_memory(task_.instruction, total, total, "done"), actionspace::Done{true});
  const Move& m = moves_[cursor_];
  actionspace::Action action = m.tool ? actionspace::Action(*m.tool) : ground(*m.gui, obs, grounder);
  const std::string next = m.tool ? actionspace::serialize_action(*m.tool) : describe(*m.gui);
  return step_text(progress_memory(task_.instruction, cursor_++, total, next), action);
}

std::optional<verify::EvaluatorConfig> OraclePlanner::goals(const tasksynth::Task& task) const {
  return task.evaluator;
}

std::optional<verify::EvaluatorConfig> InstructionPlanner::goals(const tasksynth::Task& task) const {
  return tasksynth::parse_instruction(task.instruction);
}

NoisyPlanner::NoisyPlanner(std::unique_ptr<Planner> inner, double epsilon)
    : inner_(std::move(inner)), epsilon_(epsilon) {
  if (!inner_) throw std::invalid_argument("NoisyPlanner: null inner planner");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("NoisyPlanner: epsilon must be in [0, 1]");
}

void NoisyPlanner::begin_episode(const tasksynth::Task& task, std::uint64_t seed) {
  inner_->begin_episode(task, seed);
  // Keyed by task as well, so one seed does not correlate noise across tasks.
  rng_ = Rng(derive_seed(seed ^ fnv1a64(task.id), "noise"));
}

std::string NoisyPlanner::next_step(const Observation& obs, const Grounder& grounder) {
  std::string text = inner_->next_step(obs, grounder);
  if (!rng_.chance(epsilon_)) return text;
  std::optional<std::string> memory;
  try {
    memory = actionspace::parse_step(text).memory;
  } catch (const ParseError&) {
  }
  return actionspace::serialize_step(actionspace::ParsedStep{memory, random_action(obs, rng_), {}});
}

}  // namespace hcua::rollout
