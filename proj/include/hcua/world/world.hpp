#pragma once

// Deterministic five-app desktop: file manager, browser, text editor,
// spreadsheet and a settings panel. States are plain values; every transition
// returns a new state.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcua/core/scalar.hpp"

namespace hcua::world {

inline constexpr int kScreenWidth = 1280;
inline constexpr int kScreenHeight = 800;
inline constexpr std::string_view kHomeDir = "/home/user";
inline constexpr std::string_view kDefaultBookmarkFolder = "Bookmarks bar";

enum class App { files, browser, editor, sheet, settings };
inline constexpr std::array<App, 5> kAllApps = {App::files, App::browser, App::editor,
                                                App::sheet, App::settings};

std::string_view app_name(App app);
std::optional<App> app_from_name(std::string_view name);

struct FileNode {
  bool is_dir = false;
  std::string content;
  bool operator==(const FileNode&) const = default;
};

struct Bookmark {
  std::string name;
  std::string url;  // empty for a bookmark folder entry
  std::string folder;
  bool operator==(const Bookmark&) const = default;
};

struct FilesView {
  std::string cwd{kHomeDir};
  std::optional<std::string> selected;  // entry name inside cwd
  std::string name_edit;
  std::string location_edit;
  std::size_t scroll = 0;
  bool operator==(const FilesView&) const = default;
};

struct BrowserState {
  std::string current_url;
  std::vector<std::string> history;
  std::vector<Bookmark> bookmarks;
  std::string address_edit;
  std::string bookmark_name_edit;
  std::string bookmark_folder_edit;
  std::size_t scroll = 0;
  bool operator==(const BrowserState&) const = default;
};

struct EditorState {
  std::optional<std::string> open_path;
  std::string buffer;
  std::size_t cursor = 0;
  std::string path_edit;
  bool operator==(const EditorState&) const = default;
};

struct SheetState {
  std::optional<std::string> open_path;
  std::string name{"Sheet1"};
  std::map<std::string, Scalar> cells;
  bool operator==(const SheetState&) const = default;
};

struct Focus {
  App app = App::files;
  std::optional<std::string> element_id;
  bool select_all = false;  // next typed text replaces the field
  bool operator==(const Focus&) const = default;
};

enum class PromptKind { open_file, color_theme, bookmark_folder, goto_cell, keybinding };

struct Prompt {
  PromptKind kind = PromptKind::open_file;
  std::string text;
  bool operator==(const Prompt&) const = default;
};

using SettingKey = std::pair<std::string, std::string>;  // (app, key)

struct WorldState {
  std::map<std::string, FileNode> filesystem;
  BrowserState browser;
  EditorState editor;
  SheetState sheet;
  FilesView files;
  std::map<SettingKey, std::string> settings;
  std::string clipboard;
  Focus focus;
  std::optional<Prompt> prompt;
  std::string pending_chord;
  std::uint64_t rng_seed = 0;
  std::uint64_t step_counter = 0;
  bool operator==(const WorldState&) const = default;
};

/// Equality ignoring step_counter.
bool same_content(const WorldState& a, const WorldState& b);

/// Canonical JSON of the full state; used for structural hashing.
nlohmann::json state_to_json(const WorldState& state);
std::uint64_t state_hash(const WorldState& state);

// ---------------------------------------------------------------------------
// Screen

enum class Role { button, text_field, menu_item, cell, tab, link, list_item };
std::string_view role_name(Role role);

struct BBox {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  std::pair<int, int> center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
  bool operator==(const BBox&) const = default;
};

struct StateFlags {
  bool focused = false;
  bool checked = false;
  bool disabled = false;
  bool operator==(const StateFlags&) const = default;
};

struct ScreenElement {
  std::string id;
  Role role = Role::button;
  std::string label;
  std::string value;  // visible content of fields, cells and list rows
  BBox bbox;
  StateFlags state_flags;
  bool operator==(const ScreenElement&) const = default;
};

struct Screen {
  std::vector<ScreenElement> elements;  // sorted by (y0, x0, id)
  App active_app = App::files;
  bool operator==(const Screen&) const = default;

  const ScreenElement* find(std::string_view id) const;
  /// Topmost-in-order element whose closed bbox contains the point.
  const ScreenElement* hit(int x, int y) const;
};

/// Plain-text rendering for observations and digests.
std::string screen_text(const Screen& screen);

// ---------------------------------------------------------------------------
// Workspace manifest

struct WorkspaceManifest {
  std::map<std::string, std::string> files;  // path -> content
  std::vector<std::string> dirs;
  std::map<std::string, Scalar> cells;
  std::optional<std::string> sheet_path;
  std::vector<Bookmark> bookmarks;
  std::map<SettingKey, std::string> settings;
  std::string start_url;
  std::string clipboard;
  bool operator==(const WorkspaceManifest&) const = default;
};

nlohmann::json manifest_to_json(const WorkspaceManifest& manifest);
/// Validating loader; throws ManifestError naming the offending entry.
WorkspaceManifest manifest_from_json(const nlohmann::json& doc);
/// Captures the content of a state (not its UI focus) as a manifest.
WorkspaceManifest manifest_from_state(const WorldState& state);

// ---------------------------------------------------------------------------
// Primitive actions

struct Click {
  int x = 0, y = 0;
  bool operator==(const Click&) const = default;
};
struct DoubleClick {
  int x = 0, y = 0;
  bool operator==(const DoubleClick&) const = default;
};
struct TypeText {
  std::string text;
  bool operator==(const TypeText&) const = default;
};
struct KeyPress {
  std::string combo;
  bool operator==(const KeyPress&) const = default;
};
struct Scroll {
  int dy = 0;
  bool operator==(const Scroll&) const = default;
};

using PrimitiveAction = std::variant<Click, DoubleClick, TypeText, KeyPress, Scroll>;

struct StepOutcome {
  WorldState next_state;
  bool invalid = false;
  std::optional<std::string> tool_error;
  std::string effect_log;  // "mutate: ..." for observable changes, "ui: ..." otherwise
};

/// Lowercases and orders modifiers as ctrl, alt, shift, super.
std::string normalize_combo(std::string_view combo);

// ---------------------------------------------------------------------------
// Queries

enum class SelectorKind { file_content, file_exists, url, setting, cell, clipboard, bookmark };

struct StateSelector {
  SelectorKind kind = SelectorKind::url;
  std::vector<std::string> args;

  static StateSelector file_content(std::string path) {
    return {SelectorKind::file_content, {std::move(path)}};
  }
  static StateSelector file_exists(std::string path) {
    return {SelectorKind::file_exists, {std::move(path)}};
  }
  static StateSelector url() { return {SelectorKind::url, {}}; }
  static StateSelector setting(std::string app, std::string key) {
    return {SelectorKind::setting, {std::move(app), std::move(key)}};
  }
  static StateSelector cell(std::string ref) { return {SelectorKind::cell, {std::move(ref)}}; }
  static StateSelector clipboard() { return {SelectorKind::clipboard, {}}; }
  static StateSelector bookmark(std::string name, std::string folder) {
    return {SelectorKind::bookmark, {std::move(name), std::move(folder)}};
  }
};

// ---------------------------------------------------------------------------
// Path and cell helpers

bool is_normalized_path(std::string_view path);
std::string parent_path(std::string_view path);
std::string base_name(std::string_view path);
/// Joins and normalizes; returns nullopt for paths that escape root or are empty.
std::optional<std::string> resolve_path(std::string_view cwd, std::string_view input);
bool is_cell_ref(std::string_view ref);

// ---------------------------------------------------------------------------
// Operations

WorldState reset(std::uint64_t seed, const WorkspaceManifest& manifest);
Screen render(const WorldState& state);
StepOutcome apply_primitive(const WorldState& state, const PrimitiveAction& action);
/// Drops focus from an element that is no longer rendered.
void sanitize_focus(WorldState& state);
/// Throws SelectorError for malformed selectors.
std::optional<Scalar> query(const WorldState& state, const StateSelector& selector);

}  // namespace hcua::world
