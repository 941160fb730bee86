#pragma once

// Programmatic tools: declarative, grounding-free bodies over the world.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcua/core/scalar.hpp"
#include "hcua/world/world.hpp"

namespace hcua::toolforge {

enum class ToolSource { documentation, integrated, mined };
std::string_view source_name(ToolSource s);
std::optional<ToolSource> source_from_name(std::string_view name);

struct ToolParam {
  std::string name;
  ScalarType type = ScalarType::string;
  bool required = true;
  std::string doc;
  bool operator==(const ToolParam&) const = default;
};

struct KeyOp {
  std::string combo;
  bool operator==(const KeyOp&) const = default;
};

/// Types the text obtained by substituting {param} placeholders.
struct TypeOp {
  std::string text;
  bool operator==(const TypeOp&) const = default;
};

enum class StateTarget {
  create_file,   // address [path], value = content; creates missing parent folders
  mkdir,         // address [path]
  delete_path,   // address [path]; removes the subtree
  file_content,  // address [path], value = content; the file must exist
  append_file,   // address [path], value = text appended; the file must exist
  setting,       // address [app, key], value
  cells_json,    // address [sheet name], value = JSON object of ref -> scalar
  clipboard,     // value
  url,           // value; navigates the browser
  bookmark,      // address [name, folder], value = url (empty for a folder)
  open_app,      // address [app name]
};
std::string_view target_name(StateTarget t);
std::optional<StateTarget> target_from_name(std::string_view name);

/// A direct state edit, the script-like path of a tool.
struct StateOp {
  StateTarget target = StateTarget::clipboard;
  std::vector<std::string> address;  // templates
  std::string value;                 // template
  bool operator==(const StateOp&) const = default;
};

/// Pointer actions can be written in a catalog file but never registered.
struct PointerOp {
  std::string kind;  // click, double_click, scroll
  int x = 0, y = 0, dy = 0;
  bool operator==(const PointerOp&) const = default;
};

using BodyOp = std::variant<KeyOp, TypeOp, StateOp, PointerOp>;

struct ToolSpec {
  std::string name;
  std::string doc;
  std::vector<ToolParam> params;
  std::vector<BodyOp> body;
  ToolSource source = ToolSource::documentation;
  world::App domain = world::App::files;
  bool operator==(const ToolSpec&) const = default;

  const ToolParam* param(std::string_view name) const;
};

/// Lowercase identifiers with underscores, dot-separated.
bool is_valid_tool_name(std::string_view name);

/// Placeholder names used by a template, in order of first appearance.
std::vector<std::string> placeholders(std::string_view templ);

/// Replaces each {name} with the display text of the bound value.
std::string substitute(std::string_view templ, const std::map<std::string, Scalar>& bound);

/// Structural checks of the ToolSpec invariants; throws RegistryError.
void check_spec(const ToolSpec& spec);

nlohmann::json spec_to_json(const ToolSpec& spec);
/// Parses without structural checks, so pointer ops survive to be rejected.
ToolSpec spec_from_json(const nlohmann::json& doc);

/// Python-style signature line, e.g. "vscode.set_theme(theme: str)".
std::string signature(const ToolSpec& spec);

class ToolRegistry {
 public:
  /// Throws RegistryError ("grounding_forbidden", "duplicate_name", ...).
  void add(ToolSpec spec);

  const ToolSpec* find(std::string_view name) const;
  const std::map<std::string, ToolSpec, std::less<>>& tools() const { return tools_; }
  /// Names in a domain, sorted.
  const std::vector<std::string>& by_domain(world::App domain) const;
  std::size_t size() const { return tools_.size(); }

 private:
  std::map<std::string, ToolSpec, std::less<>> tools_;
  std::map<world::App, std::vector<std::string>> by_domain_;
};

/// Value-style registration.
ToolRegistry register_tool(ToolRegistry registry, ToolSpec spec);

nlohmann::json registry_to_json(const ToolRegistry& registry);
ToolRegistry registry_from_json(const nlohmann::json& doc);

/// Domain tools first, then file-manager ("System") tools; each group sorted
/// by name; at most cap entries.
std::vector<const ToolSpec*> expose(const ToolRegistry& registry, world::App domain, std::size_t cap);

inline constexpr std::size_t kDefaultToolCap = 16;

/// The shipped catalog.
ToolRegistry builtin_registry();

}  // namespace hcua::toolforge
