#include <algorithm>
#include <cctype>

#include "hcua/core/errors.hpp"
#include "hcua/core/hash.hpp"
#include "hcua/world/world.hpp"
#include "layout.hpp"

namespace hcua::world {

using nlohmann::json;

std::string_view app_name(App app) {
  switch (app) {
    case App::files: return "files";
    case App::browser: return "browser";
    case App::editor: return "editor";
    case App::sheet: return "sheet";
    case App::settings: return "settings";
  }
  return "files";
}

std::optional<App> app_from_name(std::string_view name) {
  for (App app : kAllApps) {
    if (app_name(app) == name) return app;
  }
  return std::nullopt;
}

std::string_view role_name(Role role) {
  switch (role) {
    case Role::button: return "button";
    case Role::text_field: return "text_field";
    case Role::menu_item: return "menu_item";
    case Role::cell: return "cell";
    case Role::tab: return "tab";
    case Role::link: return "link";
    case Role::list_item: return "list_item";
  }
  return "button";
}

namespace layout {

std::string_view tab_label(App app) {
  switch (app) {
    case App::files: return "Files";
    case App::browser: return "Browser";
    case App::editor: return "Editor";
    case App::sheet: return "Sheet";
    case App::settings: return "Settings";
  }
  return "Files";
}

std::string_view prompt_label(PromptKind kind) {
  switch (kind) {
    case PromptKind::open_file: return "Open File";
    case PromptKind::color_theme: return "Color Theme";
    case PromptKind::bookmark_folder: return "New Bookmark Folder";
    case PromptKind::goto_cell: return "Go to Cell";
    case PromptKind::keybinding: return "Keyboard Shortcut";
  }
  return "Prompt";
}

bool cell_on_grid(std::string_view ref) {
  if (!is_cell_ref(ref) || ref.size() < 2) return false;
  const char column = ref[0];
  if (column < 'A' || column >= 'A' + kSheetColumns) return false;
  if (std::isdigit(static_cast<unsigned char>(ref[1])) == 0) return false;
  const int row = std::stoi(std::string(ref.substr(1)));
  return row >= 1 && row <= kSheetRows;
}

std::string cell_ref(int column, int row) {
  return std::string(1, static_cast<char>('A' + column)) + std::to_string(row);
}

}  // namespace layout

// ---------------------------------------------------------------------------
// Paths

bool is_normalized_path(std::string_view path) {
  if (path.empty() || path.front() != '/') return false;
  if (path == "/") return true;
  if (path.back() == '/') return false;
  std::size_t start = 1;
  while (start <= path.size()) {
    std::size_t end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    const std::string_view part = path.substr(start, end - start);
    if (part.empty() || part == "." || part == "..") return false;
    start = end + 1;
  }
  return true;
}

std::string parent_path(std::string_view path) {
  const std::size_t slash = path.rfind('/');
  if (slash == std::string_view::npos || slash == 0) return "/";
  return std::string(path.substr(0, slash));
}

std::string base_name(std::string_view path) {
  const std::size_t slash = path.rfind('/');
  if (slash == std::string_view::npos) return std::string(path);
  return std::string(path.substr(slash + 1));
}

std::optional<std::string> resolve_path(std::string_view cwd, std::string_view input) {
  if (input.empty()) return std::nullopt;
  std::vector<std::string> parts;
  auto push_parts = [&parts](std::string_view text) -> bool {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('/', start);
      if (end == std::string_view::npos) end = text.size();
      const std::string_view part = text.substr(start, end - start);
      if (part == "..") {
        if (parts.empty()) return false;
        parts.pop_back();
      } else if (!part.empty() && part != ".") {
        parts.emplace_back(part);
      }
      start = end + 1;
    }
    return true;
  };
  if (input.front() != '/' && !push_parts(cwd)) return std::nullopt;
  if (!push_parts(input)) return std::nullopt;
  std::string out;
  for (const auto& p : parts) out += "/" + p;
  return out.empty() ? std::string("/") : out;
}

bool is_cell_ref(std::string_view ref) {
  std::size_t i = 0;
  while (i < ref.size() && ref[i] >= 'A' && ref[i] <= 'Z') ++i;
  if (i == 0 || i == ref.size() || ref[i] == '0') return false;
  for (std::size_t j = i; j < ref.size(); ++j) {
    if (std::isdigit(static_cast<unsigned char>(ref[j])) == 0) return false;
  }
  return ref.size() - i <= 6;
}

// ---------------------------------------------------------------------------
// Serialization

bool same_content(const WorldState& a, const WorldState& b) {
  WorldState copy = b;
  copy.step_counter = a.step_counter;
  return a == copy;
}

static json bookmark_json(const Bookmark& b) {
  return json{{"name", b.name}, {"url", b.url}, {"folder", b.folder}};
}

static json settings_json(const std::map<SettingKey, std::string>& settings) {
  json out = json::object();
  for (const auto& [key, value] : settings) out[key.first][key.second] = value;
  return out;
}

json state_to_json(const WorldState& s) {
  json fs = json::object();
  for (const auto& [path, node] : s.filesystem) {
    fs[path] = node.is_dir ? json(nullptr) : json(node.content);
  }
  json bookmarks = json::array();
  for (const auto& b : s.browser.bookmarks) bookmarks.push_back(bookmark_json(b));
  json cells = json::object();
  for (const auto& [ref, v] : s.sheet.cells) cells[ref] = scalar_to_json(v);
  auto opt = [](const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); };
  return json{
      {"filesystem", fs},
      {"files", {{"cwd", s.files.cwd},
                 {"selected", opt(s.files.selected)},
                 {"name_edit", s.files.name_edit},
                 {"location_edit", s.files.location_edit},
                 {"scroll", s.files.scroll}}},
      {"browser", {{"current_url", s.browser.current_url},
                   {"history", s.browser.history},
                   {"bookmarks", bookmarks},
                   {"address_edit", s.browser.address_edit},
                   {"bookmark_name_edit", s.browser.bookmark_name_edit},
                   {"bookmark_folder_edit", s.browser.bookmark_folder_edit},
                   {"scroll", s.browser.scroll}}},
      {"editor", {{"open_path", opt(s.editor.open_path)},
                  {"buffer", s.editor.buffer},
                  {"cursor", s.editor.cursor},
                  {"path_edit", s.editor.path_edit}}},
      {"sheet", {{"open_path", opt(s.sheet.open_path)}, {"name", s.sheet.name}, {"cells", cells}}},
      {"settings", settings_json(s.settings)},
      {"clipboard", s.clipboard},
      {"focus", {{"app", app_name(s.focus.app)},
                 {"element_id", opt(s.focus.element_id)},
                 {"select_all", s.focus.select_all}}},
      {"prompt", s.prompt ? json{{"kind", static_cast<int>(s.prompt->kind)}, {"text", s.prompt->text}}
                          : json(nullptr)},
      {"pending_chord", s.pending_chord},
      {"rng_seed", s.rng_seed},
      {"step_counter", s.step_counter},
  };
}

std::uint64_t state_hash(const WorldState& state) { return fnv1a64(state_to_json(state).dump()); }

// ---------------------------------------------------------------------------
// Manifest

json manifest_to_json(const WorkspaceManifest& m) {
  json out = json::object();
  if (!m.files.empty()) out["files"] = m.files;
  if (!m.dirs.empty()) out["dirs"] = m.dirs;
  if (!m.cells.empty()) {
    json cells = json::object();
    for (const auto& [ref, v] : m.cells) cells[ref] = scalar_to_json(v);
    out["cells"] = cells;
  }
  if (m.sheet_path) out["sheet_path"] = *m.sheet_path;
  if (!m.bookmarks.empty()) {
    json arr = json::array();
    for (const auto& b : m.bookmarks) arr.push_back(bookmark_json(b));
    out["bookmarks"] = arr;
  }
  if (!m.settings.empty()) out["settings"] = settings_json(m.settings);
  if (!m.start_url.empty()) out["start_url"] = m.start_url;
  if (!m.clipboard.empty()) out["clipboard"] = m.clipboard;
  return out;
}

namespace {

const std::string& require_string(const json& v, const std::string& entry) {
  if (!v.is_string()) throw ManifestError(entry, "expected a string");
  return v.get_ref<const std::string&>();
}

void require_path(const std::string& path, const std::string& entry) {
  if (!is_normalized_path(path) || path == "/") {
    throw ManifestError(entry, "path must be absolute and normalized");
  }
}

}  // namespace

WorkspaceManifest manifest_from_json(const json& doc) {
  if (!doc.is_object()) throw ManifestError("<root>", "manifest must be a JSON object");
  static const std::array<std::string_view, 8> kKeys = {
      "files", "dirs", "cells", "sheet_path", "bookmarks", "settings", "start_url", "clipboard"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ManifestError(key, "unknown top-level key");
    }
  }
  WorkspaceManifest m;
  if (auto it = doc.find("files"); it != doc.end()) {
    if (!it->is_object()) throw ManifestError("files", "expected an object of path -> content");
    for (const auto& [path, content] : it->items()) {
      require_path(path, "files/" + path);
      m.files[path] = require_string(content, "files/" + path);
    }
  }
  if (auto it = doc.find("dirs"); it != doc.end()) {
    if (!it->is_array()) throw ManifestError("dirs", "expected an array of paths");
    for (const auto& d : *it) {
      const std::string& path = require_string(d, "dirs");
      require_path(path, "dirs/" + path);
      m.dirs.push_back(path);
    }
  }
  if (auto it = doc.find("cells"); it != doc.end()) {
    if (!it->is_object()) throw ManifestError("cells", "expected an object of ref -> scalar");
    for (const auto& [ref, value] : it->items()) {
      if (!is_cell_ref(ref)) throw ManifestError("cells/" + ref, "not a cell reference");
      try {
        m.cells[ref] = scalar_from_json(value);
      } catch (const std::invalid_argument& e) {
        throw ManifestError("cells/" + ref, e.what());
      }
    }
  }
  if (auto it = doc.find("sheet_path"); it != doc.end()) {
    const std::string& path = require_string(*it, "sheet_path");
    require_path(path, "sheet_path");
    m.sheet_path = path;
  }
  if (auto it = doc.find("bookmarks"); it != doc.end()) {
    if (!it->is_array()) throw ManifestError("bookmarks", "expected an array");
    std::size_t i = 0;
    for (const auto& b : *it) {
      const std::string entry = "bookmarks/" + std::to_string(i++);
      if (!b.is_object()) throw ManifestError(entry, "expected an object");
      Bookmark bm;
      bm.name = require_string(b.value("name", json()), entry + "/name");
      bm.url = b.contains("url") ? require_string(b["url"], entry + "/url") : std::string{};
      bm.folder = b.contains("folder") ? require_string(b["folder"], entry + "/folder")
                                       : std::string(kDefaultBookmarkFolder);
      if (bm.name.empty()) throw ManifestError(entry + "/name", "bookmark name is empty");
      m.bookmarks.push_back(std::move(bm));
    }
  }
  if (auto it = doc.find("settings"); it != doc.end()) {
    if (!it->is_object()) throw ManifestError("settings", "expected an object of app -> {key: value}");
    for (const auto& [app, keys] : it->items()) {
      if (!keys.is_object() || app.empty()) throw ManifestError("settings/" + app, "expected an object");
      if (app.find('.') != std::string::npos) throw ManifestError("settings/" + app, "app name contains '.'");
      for (const auto& [key, value] : keys.items()) {
        if (key.empty()) throw ManifestError("settings/" + app, "empty key");
        m.settings[{app, key}] = require_string(value, "settings/" + app + "/" + key);
      }
    }
  }
  if (auto it = doc.find("start_url"); it != doc.end()) m.start_url = require_string(*it, "start_url");
  if (auto it = doc.find("clipboard"); it != doc.end()) m.clipboard = require_string(*it, "clipboard");
  return m;
}

WorkspaceManifest manifest_from_state(const WorldState& s) {
  WorkspaceManifest m;
  for (const auto& [path, node] : s.filesystem) {
    if (node.is_dir) {
      // Directories implied by a file or a deeper directory are left implicit.
      const std::string prefix = path + "/";
      auto next = s.filesystem.lower_bound(prefix);
      const bool has_child = next != s.filesystem.end() && next->first.rfind(prefix, 0) == 0;
      if (!has_child) m.dirs.push_back(path);
    } else {
      m.files[path] = node.content;
    }
  }
  if (s.sheet.open_path) {
    m.cells = s.sheet.cells;
    m.sheet_path = s.sheet.open_path;
  }
  m.bookmarks = s.browser.bookmarks;
  m.settings = s.settings;
  m.start_url = s.browser.current_url;
  m.clipboard = s.clipboard;
  return m;
}

// ---------------------------------------------------------------------------
// reset / query

WorldState reset(std::uint64_t seed, const WorkspaceManifest& m) {
  WorldState s;
  s.rng_seed = seed;
  auto add_dirs = [&s](const std::string& path, const std::string& entry) {
    for (std::string p = path; p != "/"; p = parent_path(p)) {
      auto it = s.filesystem.find(p);
      if (it != s.filesystem.end()) {
        if (!it->second.is_dir) throw ManifestError(entry, "ancestor '" + p + "' is a file");
        continue;
      }
      s.filesystem[p] = FileNode{true, {}};
    }
  };
  for (const auto& [path, content] : m.files) {
    require_path(path, "files/" + path);
  }
  for (const auto& d : m.dirs) {
    require_path(d, "dirs/" + d);
    if (m.files.count(d) != 0) throw ManifestError("dirs/" + d, "also listed as a file");
    add_dirs(d, "dirs/" + d);
  }
  for (const auto& [path, content] : m.files) {
    add_dirs(parent_path(path), "files/" + path);
    auto it = s.filesystem.find(path);
    if (it != s.filesystem.end() && it->second.is_dir) {
      throw ManifestError("files/" + path, "path is also a directory");
    }
    s.filesystem[path] = FileNode{false, content};
  }
  for (const auto& [ref, v] : m.cells) {
    if (!is_cell_ref(ref)) throw ManifestError("cells/" + ref, "not a cell reference");
  }
  if (!m.cells.empty() || m.sheet_path) {
    if (m.sheet_path) require_path(*m.sheet_path, "sheet_path");
    s.sheet.open_path = m.sheet_path.value_or(std::string(kHomeDir) + "/Sheet1.csv");
    s.sheet.cells = m.cells;
  }
  for (std::size_t i = 0; i < m.bookmarks.size(); ++i) {
    if (m.bookmarks[i].name.empty()) {
      throw ManifestError("bookmarks/" + std::to_string(i), "bookmark name is empty");
    }
  }
  for (const auto& [key, value] : m.settings) {
    if (key.first.empty() || key.second.empty() || key.first.find('.') != std::string::npos) {
      throw ManifestError("settings/" + key.first + "/" + key.second, "malformed setting address");
    }
  }
  s.browser.bookmarks = m.bookmarks;
  s.browser.current_url = m.start_url;
  s.browser.address_edit = m.start_url;
  if (!m.start_url.empty()) s.browser.history.push_back(m.start_url);
  s.settings = m.settings;
  s.clipboard = m.clipboard;
  auto home = s.filesystem.find(std::string(kHomeDir));
  s.files.cwd = (home != s.filesystem.end() && home->second.is_dir) ? std::string(kHomeDir) : "/";
  s.focus = Focus{App::files, std::nullopt, false};
  return s;
}

std::optional<Scalar> query(const WorldState& s, const StateSelector& sel) {
  auto expect_args = [&sel](std::size_t n) {
    if (sel.args.size() != n) {
      throw SelectorError("selector expects " + std::to_string(n) + " argument(s), got " +
                          std::to_string(sel.args.size()));
    }
  };
  auto expect_path = [](const std::string& path) {
    if (!is_normalized_path(path)) throw SelectorError("malformed path '" + path + "'");
  };
  switch (sel.kind) {
    case SelectorKind::file_content: {
      expect_args(1);
      expect_path(sel.args[0]);
      auto it = s.filesystem.find(sel.args[0]);
      if (it == s.filesystem.end() || it->second.is_dir) return std::nullopt;
      return Scalar{it->second.content};
    }
    case SelectorKind::file_exists: {
      expect_args(1);
      expect_path(sel.args[0]);
      return Scalar{sel.args[0] == "/" || s.filesystem.count(sel.args[0]) != 0};
    }
    case SelectorKind::url:
      expect_args(0);
      if (s.browser.current_url.empty()) return std::nullopt;
      return Scalar{s.browser.current_url};
    case SelectorKind::setting: {
      expect_args(2);
      if (sel.args[0].empty() || sel.args[1].empty()) throw SelectorError("empty setting address");
      auto it = s.settings.find({sel.args[0], sel.args[1]});
      if (it == s.settings.end()) return std::nullopt;
      return Scalar{it->second};
    }
    case SelectorKind::cell: {
      expect_args(1);
      if (!is_cell_ref(sel.args[0])) throw SelectorError("malformed cell ref '" + sel.args[0] + "'");
      if (!s.sheet.open_path) return std::nullopt;
      auto it = s.sheet.cells.find(sel.args[0]);
      if (it == s.sheet.cells.end()) return std::nullopt;
      return it->second;
    }
    case SelectorKind::clipboard:
      expect_args(0);
      return Scalar{s.clipboard};
    case SelectorKind::bookmark: {
      expect_args(2);
      const bool found = std::any_of(
          s.browser.bookmarks.begin(), s.browser.bookmarks.end(),
          [&](const Bookmark& b) { return b.name == sel.args[0] && b.folder == sel.args[1]; });
      return Scalar{found};
    }
  }
  throw SelectorError("unknown selector kind");
}

}  // namespace hcua::world
