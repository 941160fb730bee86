#include <algorithm>

#include "hcua/actionspace/action.hpp"
#include "hcua/core/errors.hpp"

namespace hcua::actionspace {

namespace {

using toolforge::StateOp;
using toolforge::StateTarget;
using world::WorldState;

struct OpFailure {
  std::string reason;
};

std::string join_home(const std::string& p) {
  auto resolved = world::resolve_path(world::kHomeDir, p);
  if (!resolved || *resolved == "/") throw OpFailure{"bad path '" + p + "'"};
  return *resolved;
}

void make_dirs(WorldState& s, const std::string& path) {
  for (std::string p = path; p != "/"; p = world::parent_path(p)) {
    auto it = s.filesystem.find(p);
    if (it == s.filesystem.end()) {
      s.filesystem[p] = world::FileNode{true, {}};
    } else if (!it->second.is_dir) {
      throw OpFailure{"'" + p + "' is a file"};
    }
  }
}

world::FileNode& existing_file(WorldState& s, const std::string& path) {
  auto it = s.filesystem.find(path);
  if (it == s.filesystem.end() || it->second.is_dir) throw OpFailure{"no file '" + path + "'"};
  return it->second;
}

void sync_editor(WorldState& s, const std::string& path) {
  if (s.editor.open_path == path) {
    s.editor.buffer = s.filesystem.at(path).content;
    s.editor.cursor = s.editor.buffer.size();
  }
}

std::string apply_state_op(WorldState& s, const StateOp& op, const std::map<std::string, Scalar>& bound) {
  std::vector<std::string> addr;
  for (const auto& a : op.address) addr.push_back(toolforge::substitute(a, bound));
  const std::string value = toolforge::substitute(op.value, bound);
  switch (op.target) {
    case StateTarget::create_file: {
      const std::string path = join_home(addr.at(0));
      make_dirs(s, world::parent_path(path));
      auto it = s.filesystem.find(path);
      if (it != s.filesystem.end() && it->second.is_dir) throw OpFailure{"'" + path + "' is a folder"};
      s.filesystem[path] = world::FileNode{false, value};
      sync_editor(s, path);
      return "created file " + path;
    }
    case StateTarget::mkdir: {
      const std::string path = join_home(addr.at(0));
      make_dirs(s, path);
      return "created folder " + path;
    }
    case StateTarget::delete_path: {
      const std::string path = join_home(addr.at(0));
      if (s.filesystem.count(path) == 0) throw OpFailure{"no such path '" + path + "'"};
      const std::string prefix = path + "/";
      for (auto it = s.filesystem.begin(); it != s.filesystem.end();) {
        if (it->first == path || it->first.rfind(prefix, 0) == 0) it = s.filesystem.erase(it);
        else ++it;
      }
      if (s.files.cwd == path || s.files.cwd.rfind(prefix, 0) == 0) s.files.cwd = world::parent_path(path);
      if (s.files.selected && s.filesystem.count(s.files.cwd == "/" ? "/" + *s.files.selected
                                                                    : s.files.cwd + "/" + *s.files.selected) == 0) {
        s.files.selected.reset();
      }
      return "deleted " + path;
    }
    case StateTarget::file_content: {
      const std::string path = join_home(addr.at(0));
      existing_file(s, path).content = value;
      sync_editor(s, path);
      return "wrote " + path;
    }
    case StateTarget::append_file: {
      const std::string path = join_home(addr.at(0));
      existing_file(s, path).content += value;
      sync_editor(s, path);
      return "appended to " + path;
    }
    case StateTarget::setting: {
      if (addr.at(0).empty() || addr.at(1).empty() || addr[0].find('.') != std::string::npos) {
        throw OpFailure{"bad setting address"};
      }
      s.settings[{addr[0], addr[1]}] = value;
      return "setting " + addr[0] + "." + addr[1] + " = " + value;
    }
    case StateTarget::cells_json: {
      if (!s.sheet.open_path) throw OpFailure{"no sheet open"};
      if (addr.at(0) != s.sheet.name) throw OpFailure{"no sheet named '" + addr[0] + "'"};
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(value);
      } catch (const nlohmann::json::exception&) {
        throw OpFailure{"cells is not valid JSON"};
      }
      if (!doc.is_object() || doc.empty()) throw OpFailure{"cells must be a non-empty JSON object"};
      std::string refs;
      for (const auto& [ref, v] : doc.items()) {
        if (!world::is_cell_ref(ref)) throw OpFailure{"bad cell reference '" + ref + "'"};
        try {
          Scalar sv = scalar_from_json(v);
          // Strings are entered like typed text, so "42" becomes a number.
          if (const auto* text = std::get_if<std::string>(&sv)) sv = parse_cell_text(*text);
          s.sheet.cells[ref] = std::move(sv);
        } catch (const std::invalid_argument&) {
          throw OpFailure{"cell " + ref + " value is not a scalar"};
        }
        refs += (refs.empty() ? "" : ",") + ref;
      }
      return "cells " + refs + " set";
    }
    case StateTarget::clipboard:
      s.clipboard = value;
      return "clipboard = " + value;
    case StateTarget::url:
      if (value.empty()) throw OpFailure{"empty url"};
      s.browser.current_url = value;
      s.browser.history.push_back(value);
      s.browser.address_edit = value;
      return "navigated to " + value;
    case StateTarget::bookmark:
      if (addr.at(0).empty()) throw OpFailure{"empty bookmark name"};
      s.browser.bookmarks.push_back(world::Bookmark{addr[0], value, addr[1].empty()
                                                                        ? std::string(world::kDefaultBookmarkFolder)
                                                                        : addr[1]});
      return "bookmark " + addr[0] + " in " + s.browser.bookmarks.back().folder;
    case StateTarget::open_app: {
      auto app = world::app_from_name(addr.at(0));
      if (!app) throw OpFailure{"unknown app '" + addr[0] + "'"};
      s.focus = world::Focus{*app, std::nullopt, false};
      s.prompt.reset();
      s.pending_chord.clear();
      return "ui: switched to " + addr[0];
    }
  }
  throw OpFailure{"unknown state op"};
}

std::optional<std::string> bind_args(const toolforge::ToolSpec& spec, const std::map<std::string, Scalar>& args,
                                     std::map<std::string, Scalar>& bound) {
  for (const auto& [name, value] : args) {
    const toolforge::ToolParam* p = spec.param(name);
    if (p == nullptr) return "unknown argument '" + name + "'";
    const ScalarType t = scalar_type(value);
    if (t == p->type) {
      bound[name] = value;
    } else if (p->type == ScalarType::floating && t == ScalarType::integer) {
      bound[name] = static_cast<double>(std::get<std::int64_t>(value));
    } else {
      return "argument '" + name + "' must be " + std::string(scalar_type_name(p->type));
    }
  }
  for (const auto& p : spec.params) {
    if (p.required && bound.count(p.name) == 0) return "missing argument '" + p.name + "'";
  }
  return std::nullopt;
}

world::StepOutcome tool_failure(const WorldState& state, std::string error, std::string detail) {
  world::StepOutcome out;
  out.next_state = state;
  out.next_state.step_counter = state.step_counter + 1;
  out.tool_error = std::move(error);
  out.effect_log = "tool_error: " + *out.tool_error + (detail.empty() ? "" : " (" + detail + ")");
  return out;
}

}  // namespace

world::StepOutcome run_tool(const WorldState& state, const toolforge::ToolSpec& spec,
                            const std::map<std::string, Scalar>& args, ExecTrace* trace) {
  std::map<std::string, Scalar> bound;
  if (auto err = bind_args(spec, args, bound)) return tool_failure(state, "bad_args", *err);

  WorldState s = state;
  ExecTrace local;
  bool mutated = false;
  std::vector<std::string> effects;
  for (std::size_t i = 0; i < spec.body.size(); ++i) {
    const auto& op = spec.body[i];
    const std::string where = "op " + std::to_string(i + 1) + ": ";
    if (std::holds_alternative<toolforge::PointerOp>(op)) {
      return tool_failure(state, "grounding_forbidden", where + "pointer action in tool body");
    }
    if (const auto* st = std::get_if<StateOp>(&op)) {
      try {
        std::string effect = apply_state_op(s, *st, bound);
        ++local.state_ops;
        if (effect.rfind("ui: ", 0) == 0) {
          effect.erase(0, 4);
        } else {
          mutated = true;
        }
        effects.push_back(std::move(effect));
      } catch (const OpFailure& f) {
        return tool_failure(state, "body_failed", where + f.reason);
      }
      world::sanitize_focus(s);
      continue;
    }
    world::PrimitiveAction prim;
    if (const auto* k = std::get_if<toolforge::KeyOp>(&op)) {
      prim = world::KeyPress{k->combo};
    } else {
      prim = world::TypeText{toolforge::substitute(std::get<toolforge::TypeOp>(op).text, bound)};
    }
    world::StepOutcome o = world::apply_primitive(s, prim);
    ++local.keyboard_transitions;
    if (o.invalid) return tool_failure(state, "body_failed", where + o.effect_log);
    if (o.effect_log.rfind("mutate: ", 0) == 0) {
      mutated = true;
      effects.push_back(o.effect_log.substr(8));
    }
    s = std::move(o.next_state);
  }
  if (trace != nullptr) {
    trace->keyboard_transitions += local.keyboard_transitions;
    trace->state_ops += local.state_ops;
  }
  world::StepOutcome out;
  out.next_state = std::move(s);
  out.next_state.step_counter = state.step_counter + 1;
  std::string joined;
  for (const auto& e : effects) joined += (joined.empty() ? "" : "; ") + e;
  out.effect_log = std::string(mutated ? "mutate: " : "ui: ") + "tool " + spec.name +
                   (joined.empty() ? "" : ": " + joined);
  return out;
}

world::StepOutcome execute(const WorldState& state, const Action& action, const toolforge::ToolRegistry& registry,
                           ExecTrace* trace) {
  return std::visit(
      [&](const auto& a) -> world::StepOutcome {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ToolCall>) {
          const toolforge::ToolSpec* spec = registry.find(a.name);
          if (spec == nullptr) return tool_failure(state, "unknown_tool", a.name);
          return run_tool(state, *spec, a.args, trace);
        } else if constexpr (std::is_same_v<T, Done>) {
          world::StepOutcome out;
          out.next_state = state;
          out.next_state.step_counter = state.step_counter + 1;
          out.effect_log = std::string("ui: done(success=") + (a.claims_success ? "true" : "false") + ")";
          return out;
        } else {
          if (trace != nullptr) {
            if constexpr (std::is_same_v<T, world::KeyPress> || std::is_same_v<T, world::TypeText>) {
              ++trace->keyboard_transitions;
            } else {
              ++trace->coordinate_transitions;
            }
          }
          return world::apply_primitive(state, world::PrimitiveAction{a});
        }
      },
      action);
}

}  // namespace hcua::actionspace
