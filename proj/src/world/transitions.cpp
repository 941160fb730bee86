#include <algorithm>
#include <cctype>

#include "hcua/world/world.hpp"
#include "layout.hpp"

namespace hcua::world {

std::string normalize_combo(std::string_view combo) {
  std::string lower;
  for (char c : combo) {
    if (std::isspace(static_cast<unsigned char>(c)) == 0) {
      lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= lower.size()) {
    std::size_t end = lower.find('+', start);
    if (end == std::string::npos) end = lower.size();
    if (end > start) parts.push_back(lower.substr(start, end - start));
    start = end + 1;
  }
  static const std::array<std::string_view, 4> kModifiers = {"ctrl", "alt", "shift", "super"};
  std::string out;
  for (auto mod : kModifiers) {
    if (std::find(parts.begin(), parts.end(), mod) != parts.end()) out += std::string(mod) + "+";
  }
  for (const auto& p : parts) {
    if (std::find(kModifiers.begin(), kModifiers.end(), p) == kModifiers.end()) out += p + "+";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

namespace {

struct Result {
  bool invalid = false;
  std::string effect;
};

Result invalid(std::string why) { return {true, "invalid: " + std::move(why)}; }
Result ui(std::string what) { return {false, "ui: " + std::move(what)}; }
Result mutate(std::string what) { return {false, "mutate: " + std::move(what)}; }

bool starts_with(std::string_view s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

class Machine {
 public:
  explicit Machine(WorldState& s) : s_(s) {}

  Result click(int x, int y, bool twice) {
    const Screen screen = render(s_);
    const ScreenElement* e = screen.hit(x, y);
    if (e == nullptr) return invalid("no element at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    if (e->state_flags.disabled) return invalid(e->id + " is disabled");
    const std::string id = e->id;
    if (s_.prompt && id != layout::kPromptId) {
      s_.prompt.reset();
      s_.focus.element_id.reset();
    }
    s_.pending_chord.clear();
    if (id == layout::kPromptId) return focus_field(id, false);
    if (starts_with(id, "tab.")) return switch_app(*app_from_name(id.substr(4)));
    switch (s_.focus.app) {
      case App::files: return click_files(id, twice);
      case App::browser: return click_browser(id);
      case App::editor: return click_editor(id);
      case App::sheet: return click_sheet(id);
      case App::settings: return focus_field(id, true);
    }
    return invalid("unhandled element");
  }

  Result type(const std::string& text) {
    if (s_.prompt) {
      s_.prompt->text += text;
      return ui("prompt text");
    }
    if (!s_.focus.element_id) return invalid("type with no focused field");
    const std::string id = *s_.focus.element_id;
    const bool replace = s_.focus.select_all;
    s_.focus.select_all = false;
    auto edit = [&](std::string& field) {
      if (replace) field.clear();
      field += text;
    };
    if (id == "files.location") { edit(s_.files.location_edit); return ui("typed location"); }
    if (id == "files.name") { edit(s_.files.name_edit); return ui("typed name"); }
    if (id == "browser.address") { edit(s_.browser.address_edit); return ui("typed address"); }
    if (id == "browser.bookmark_name") { edit(s_.browser.bookmark_name_edit); return ui("typed bookmark name"); }
    if (id == "browser.bookmark_folder") { edit(s_.browser.bookmark_folder_edit); return ui("typed bookmark folder"); }
    if (id == "editor.path") { edit(s_.editor.path_edit); return ui("typed path"); }
    if (id == "editor.buffer") {
      edit(s_.editor.buffer);
      s_.editor.cursor = s_.editor.buffer.size();
      return ui("typed into document");
    }
    if (starts_with(id, layout::kCellPrefix)) {
      const std::string ref = id.substr(layout::kCellPrefix.size());
      std::string current;
      if (!replace) {
        if (auto it = s_.sheet.cells.find(ref); it != s_.sheet.cells.end()) current = scalar_text(it->second);
      }
      s_.sheet.cells[ref] = parse_cell_text(current + text);
      return mutate("cell " + ref + " = " + scalar_text(s_.sheet.cells[ref]));
    }
    if (starts_with(id, layout::kSettingPrefix)) {
      auto key = setting_key(id);
      edit(s_.settings[key]);
      return mutate("setting " + key.first + "." + key.second + " = " + s_.settings[key]);
    }
    return invalid("focused element does not accept text");
  }

  Result key(const std::string& raw) {
    const std::string combo = normalize_combo(raw);
    if (combo.empty()) return invalid("empty key combo");
    if (s_.prompt) return prompt_key(combo);
    if (!s_.pending_chord.empty()) {
      const std::string first = std::exchange(s_.pending_chord, {});
      if (first == "ctrl+k" && combo == "ctrl+t") return open_prompt(PromptKind::color_theme);
      if (first == "ctrl+k" && combo == "ctrl+s") return open_prompt(PromptKind::keybinding);
      return invalid("no binding for chord " + first + " " + combo);
    }
    if (combo == "ctrl+k") {
      s_.pending_chord = combo;
      return ui("chord ctrl+k");
    }
    if (combo.size() == 5 && starts_with(combo, "alt+") && combo[4] >= '1' && combo[4] <= '5') {
      return switch_app(kAllApps[static_cast<std::size_t>(combo[4] - '1')]);
    }
    if (combo == "ctrl+l") {
      switch_app(App::browser);
      s_.browser.address_edit = s_.browser.current_url;
      s_.focus.element_id = "browser.address";
      s_.focus.select_all = true;
      return ui("focus address bar");
    }
    if (combo == "ctrl+o") return open_prompt(PromptKind::open_file);
    if (combo == "ctrl+shift+o") {
      switch_app(App::browser);
      return open_prompt(PromptKind::bookmark_folder);
    }
    if (combo == "escape") {
      if (!s_.focus.element_id) return invalid("nothing to dismiss");
      s_.focus.element_id.reset();
      s_.focus.select_all = false;
      return ui("focus cleared");
    }
    if (combo == "backspace") return backspace();
    switch (s_.focus.app) {
      case App::files: return key_files(combo);
      case App::browser: return key_browser(combo);
      case App::editor: return key_editor(combo);
      case App::sheet: return key_sheet(combo);
      case App::settings:
        if (combo == "enter" && s_.focus.element_id) {
          s_.focus.element_id.reset();
          return ui("setting committed");
        }
        break;
    }
    return invalid("no binding for " + combo);
  }

  Result scroll(int dy) {
    std::size_t* offset = nullptr;
    std::size_t count = 0;
    if (s_.focus.app == App::files) {
      offset = &s_.files.scroll;
      for (const auto& [path, node] : s_.filesystem) {
        if (path != "/" && parent_path(path) == s_.files.cwd) ++count;
      }
    } else if (s_.focus.app == App::browser) {
      offset = &s_.browser.scroll;
      count = s_.browser.bookmarks.size();
    } else {
      return invalid("no scrollable list in " + std::string(app_name(s_.focus.app)));
    }
    const long max_offset = static_cast<long>(count > layout::kListRows ? count - layout::kListRows : 0);
    const long next = std::clamp(static_cast<long>(*offset) + dy, 0L, max_offset);
    *offset = static_cast<std::size_t>(next);
    return ui("scrolled to " + std::to_string(next));
  }

 private:
  static SettingKey setting_key(const std::string& id) {
    const std::string name = id.substr(layout::kSettingPrefix.size());
    const std::size_t dot = name.find('.');
    return {name.substr(0, dot), name.substr(dot + 1)};
  }

  Result switch_app(App app) {
    const bool same = s_.focus.app == app;
    s_.focus = Focus{app, std::nullopt, false};
    s_.prompt.reset();
    s_.pending_chord.clear();
    return ui(same ? "already in " + std::string(app_name(app)) : "switched to " + std::string(app_name(app)));
  }

  Result focus_field(const std::string& id, bool select_all) {
    s_.focus.element_id = id;
    s_.focus.select_all = select_all;
    return ui("focus " + id);
  }

  Result open_prompt(PromptKind kind) {
    if (kind == PromptKind::goto_cell && !s_.sheet.open_path) return invalid("no sheet open");
    s_.prompt = Prompt{kind, {}};
    s_.focus.element_id = std::string(layout::kPromptId);
    s_.focus.select_all = false;
    return ui("prompt " + std::string(layout::prompt_label(kind)));
  }

  Result backspace() {
    if (!s_.focus.element_id) return invalid("backspace with no focused field");
    const std::string id = *s_.focus.element_id;
    const bool all = std::exchange(s_.focus.select_all, false);
    auto erase = [all](std::string& field) {
      if (all) field.clear();
      else if (!field.empty()) field.pop_back();
    };
    if (id == "files.location") erase(s_.files.location_edit);
    else if (id == "files.name") erase(s_.files.name_edit);
    else if (id == "browser.address") erase(s_.browser.address_edit);
    else if (id == "browser.bookmark_name") erase(s_.browser.bookmark_name_edit);
    else if (id == "browser.bookmark_folder") erase(s_.browser.bookmark_folder_edit);
    else if (id == "editor.path") erase(s_.editor.path_edit);
    else if (id == "editor.buffer") {
      erase(s_.editor.buffer);
      s_.editor.cursor = s_.editor.buffer.size();
    } else if (starts_with(id, layout::kSettingPrefix)) {
      auto key = setting_key(id);
      erase(s_.settings[key]);
      return mutate("setting " + key.first + "." + key.second + " = " + s_.settings[key]);
    } else if (starts_with(id, layout::kCellPrefix)) {
      const std::string ref = id.substr(layout::kCellPrefix.size());
      auto it = s_.sheet.cells.find(ref);
      if (it == s_.sheet.cells.end()) return ui("cell already empty");
      std::string text = all ? std::string{} : scalar_text(it->second);
      if (!text.empty()) text.pop_back();
      if (text.empty()) s_.sheet.cells.erase(it);
      else it->second = parse_cell_text(text);
      return mutate("cell " + ref + " edited");
    } else {
      return invalid("focused element does not accept text");
    }
    return ui("backspace");
  }

  Result prompt_key(const std::string& combo) {
    if (combo == "escape") {
      s_.prompt.reset();
      s_.focus.element_id.reset();
      return ui("prompt cancelled");
    }
    if (combo == "backspace") {
      if (!s_.prompt->text.empty()) s_.prompt->text.pop_back();
      return ui("prompt text");
    }
    if (combo != "enter") return invalid("prompt accepts only enter, escape, backspace");
    const Prompt p = *s_.prompt;
    Result r = commit_prompt(p);
    return r;
  }

  Result commit_prompt(const Prompt& p) {
    const std::string& text = p.text;
    switch (p.kind) {
      case PromptKind::open_file: {
        auto path = resolve_path(kHomeDir, text);
        if (!path) return invalid("bad path '" + text + "'");
        if (!can_hold_file(*path)) return invalid("cannot open '" + *path + "'");
        s_.prompt.reset();
        open_in_editor(*path, true);
        return ui("opened " + *path);
      }
      case PromptKind::color_theme: {
        if (text.empty()) return invalid("empty theme");
        s_.prompt.reset();
        s_.focus.element_id.reset();
        s_.settings[{"editor", "theme"}] = text;
        return mutate("setting editor.theme = " + text);
      }
      case PromptKind::bookmark_folder: {
        if (text.empty()) return invalid("empty folder name");
        s_.prompt.reset();
        s_.focus.element_id.reset();
        s_.browser.bookmarks.push_back(Bookmark{text, "", std::string(kDefaultBookmarkFolder)});
        return mutate("bookmark folder " + text + " in " + std::string(kDefaultBookmarkFolder));
      }
      case PromptKind::goto_cell: {
        std::string ref;
        for (char c : text) ref.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        if (!s_.sheet.open_path || !layout::cell_on_grid(ref)) return invalid("no cell '" + text + "'");
        s_.prompt.reset();
        s_.focus = Focus{App::sheet, std::string(layout::kCellPrefix) + ref, true};
        return ui("go to cell " + ref);
      }
      case PromptKind::keybinding: {
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
          return invalid("expected key=command");
        }
        const std::string combo = normalize_combo(text.substr(0, eq));
        const std::string command = text.substr(eq + 1);
        s_.prompt.reset();
        s_.focus.element_id.reset();
        s_.settings[{"keybindings", combo}] = command;
        return mutate("setting keybindings." + combo + " = " + command);
      }
    }
    return invalid("unknown prompt");
  }

  bool can_hold_file(const std::string& path) const {
    if (path == "/") return false;
    auto it = s_.filesystem.find(path);
    if (it != s_.filesystem.end()) return !it->second.is_dir;
    auto parent = s_.filesystem.find(parent_path(path));
    return parent_path(path) == "/" || (parent != s_.filesystem.end() && parent->second.is_dir);
  }

  void open_in_editor(const std::string& path, bool select_all) {
    auto it = s_.filesystem.find(path);
    s_.editor.open_path = path;
    s_.editor.buffer = (it != s_.filesystem.end()) ? it->second.content : std::string{};
    s_.editor.cursor = s_.editor.buffer.size();
    s_.editor.path_edit = path;
    s_.focus = Focus{App::editor, std::string("editor.buffer"), select_all};
    s_.prompt.reset();
  }

  Result save_editor() {
    if (!s_.editor.open_path) return invalid("no file open");
    const std::string path = *s_.editor.open_path;
    if (!can_hold_file(path)) return ui("save failed for " + path);
    s_.filesystem[path] = FileNode{false, s_.editor.buffer};
    return mutate("saved " + path);
  }

  // ---------------------------------------------------------------- files
  std::string unique_child(const std::string& dir, const std::string& stem) const {
    auto join = [&dir](const std::string& name) { return dir == "/" ? "/" + name : dir + "/" + name; };
    std::string name = stem;
    for (int n = 2; s_.filesystem.count(join(name)) != 0; ++n) name = stem + " " + std::to_string(n);
    return join(name);
  }

  Result create_entry(bool dir) {
    const std::string trimmed = s_.files.name_edit;
    std::optional<std::string> path;
    if (trimmed.empty()) {
      path = unique_child(s_.files.cwd, dir ? "New Folder" : "Untitled.txt");
    } else {
      path = resolve_path(s_.files.cwd, trimmed);
    }
    if (!path || *path == "/" || s_.filesystem.count(*path) != 0) {
      return ui("cannot create '" + trimmed + "'");
    }
    const std::string parent = parent_path(*path);
    auto pit = s_.filesystem.find(parent);
    if (parent != "/" && (pit == s_.filesystem.end() || !pit->second.is_dir)) {
      return ui("cannot create '" + trimmed + "': missing parent");
    }
    s_.filesystem[*path] = FileNode{dir, {}};
    s_.files.name_edit.clear();
    s_.focus.select_all = false;
    return mutate(std::string(dir ? "created folder " : "created file ") + *path);
  }

  std::string selected_path() const {
    return s_.files.cwd == "/" ? "/" + *s_.files.selected : s_.files.cwd + "/" + *s_.files.selected;
  }

  Result change_dir(const std::string& dir) {
    auto it = s_.filesystem.find(dir);
    if (dir != "/" && (it == s_.filesystem.end() || !it->second.is_dir)) {
      return invalid("not a directory: " + dir);
    }
    s_.files.cwd = dir;
    s_.files.selected.reset();
    s_.files.scroll = 0;
    s_.focus.element_id.reset();
    s_.focus.select_all = false;
    return ui("cd " + dir);
  }

  Result open_selected() {
    if (!s_.files.selected) return invalid("nothing selected");
    const std::string path = selected_path();
    auto it = s_.filesystem.find(path);
    if (it == s_.filesystem.end()) return invalid("selection vanished");
    if (it->second.is_dir) return change_dir(path);
    open_in_editor(path, false);
    return ui("opened " + path);
  }

  Result delete_selected() {
    if (!s_.files.selected) return invalid("nothing selected");
    const std::string path = selected_path();
    const std::string prefix = path + "/";
    for (auto it = s_.filesystem.begin(); it != s_.filesystem.end();) {
      if (it->first == path || starts_with(it->first, prefix)) it = s_.filesystem.erase(it);
      else ++it;
    }
    s_.files.selected.reset();
    if (s_.focus.element_id && starts_with(*s_.focus.element_id, layout::kFilesEntryPrefix)) {
      s_.focus.element_id.reset();
    }
    return mutate("deleted " + path);
  }

  Result copy_selected() {
    if (!s_.files.selected) return invalid("nothing selected");
    s_.clipboard = selected_path();
    return mutate("clipboard = " + s_.clipboard);
  }

  Result click_files(const std::string& id, bool twice) {
    if (id == "files.location") {
      s_.files.location_edit = s_.files.cwd;
      return focus_field(id, true);
    }
    if (id == "files.name") return focus_field(id, true);
    if (id == "files.new_folder") return create_entry(true);
    if (id == "files.new_file") return create_entry(false);
    if (id == "files.delete") return delete_selected();
    if (id == "files.up") return change_dir(parent_path(s_.files.cwd));
    if (id == "files.copy_path") return copy_selected();
    if (id == "files.open") return open_selected();
    if (starts_with(id, layout::kFilesEntryPrefix)) {
      s_.files.selected = id.substr(layout::kFilesEntryPrefix.size());
      s_.focus.element_id = id;
      s_.focus.select_all = false;
      if (twice) return open_selected();
      return ui("selected " + *s_.files.selected);
    }
    return invalid("unhandled element " + id);
  }

  Result key_files(const std::string& combo) {
    if (combo == "alt+up") return change_dir(parent_path(s_.files.cwd));
    if (combo == "alt+home") return change_dir(std::string(kHomeDir));
    if (combo == "delete") return delete_selected();
    if (combo == "ctrl+c") return copy_selected();
    if (combo == "enter") {
      if (s_.focus.element_id == std::optional<std::string>("files.location")) {
        auto dir = resolve_path(s_.files.cwd, s_.files.location_edit);
        if (!dir) return invalid("bad location");
        return change_dir(*dir);
      }
      if (s_.files.selected) return open_selected();
    }
    return invalid("no binding for " + combo + " in files");
  }

  // -------------------------------------------------------------- browser
  Result navigate(const std::string& url) {
    if (url.empty()) return invalid("empty url");
    s_.browser.current_url = url;
    s_.browser.history.push_back(url);
    s_.browser.address_edit = url;
    s_.focus.element_id.reset();
    s_.focus.select_all = false;
    return mutate("navigated to " + url);
  }

  Result go_back() {
    if (s_.browser.history.size() < 2) return ui("no history");
    s_.browser.history.pop_back();
    s_.browser.current_url = s_.browser.history.back();
    s_.browser.address_edit = s_.browser.current_url;
    return mutate("navigated back to " + s_.browser.current_url);
  }

  Result add_bookmark(bool as_folder) {
    auto& br = s_.browser;
    if (as_folder && br.bookmark_name_edit.empty()) return invalid("folder needs a name");
    if (!as_folder && br.current_url.empty() && br.bookmark_name_edit.empty()) {
      return invalid("nothing to bookmark");
    }
    Bookmark bm;
    bm.name = br.bookmark_name_edit.empty() ? br.current_url : br.bookmark_name_edit;
    bm.url = as_folder ? std::string{} : br.current_url;
    bm.folder = br.bookmark_folder_edit.empty() ? std::string(kDefaultBookmarkFolder) : br.bookmark_folder_edit;
    br.bookmarks.push_back(bm);
    br.bookmark_name_edit.clear();
    br.bookmark_folder_edit.clear();
    s_.focus.select_all = false;
    return mutate(std::string(as_folder ? "bookmark folder " : "bookmark ") + bm.name + " in " + bm.folder);
  }

  Result click_browser(const std::string& id) {
    if (id == "browser.back") return go_back();
    if (id == "browser.address") {
      s_.browser.address_edit = s_.browser.current_url;
      return focus_field(id, true);
    }
    if (id == "browser.go") {
      const bool editing = s_.focus.element_id == std::optional<std::string>("browser.address");
      return navigate(editing ? s_.browser.address_edit : s_.browser.current_url);
    }
    if (id == "browser.bookmark_name" || id == "browser.bookmark_folder") return focus_field(id, true);
    if (id == "browser.add_bookmark") return add_bookmark(false);
    if (id == "browser.add_folder") return add_bookmark(true);
    if (starts_with(id, layout::kBookmarkPrefix)) {
      const std::size_t index = std::stoul(id.substr(layout::kBookmarkPrefix.size()));
      const Bookmark bm = s_.browser.bookmarks.at(index);
      if (bm.url.empty()) return ui("folder " + bm.name);
      return navigate(bm.url);
    }
    return invalid("unhandled element " + id);
  }

  Result key_browser(const std::string& combo) {
    if (combo == "alt+left") return go_back();
    if (combo == "ctrl+d") {
      if (s_.browser.current_url.empty()) return invalid("no page to bookmark");
      s_.browser.bookmarks.push_back(
          Bookmark{s_.browser.current_url, s_.browser.current_url, std::string(kDefaultBookmarkFolder)});
      return mutate("bookmark " + s_.browser.current_url + " in " + std::string(kDefaultBookmarkFolder));
    }
    if (combo == "enter" && s_.focus.element_id) {
      const std::string& f = *s_.focus.element_id;
      if (f == "browser.address") return navigate(s_.browser.address_edit);
      if (f == "browser.bookmark_name" || f == "browser.bookmark_folder") return add_bookmark(false);
    }
    return invalid("no binding for " + combo + " in browser");
  }

  // --------------------------------------------------------------- editor
  Result click_editor(const std::string& id) {
    if (id == "editor.path") {
      s_.editor.path_edit = s_.editor.open_path.value_or("");
      return focus_field(id, true);
    }
    if (id == "editor.open") {
      auto path = resolve_path(kHomeDir, s_.editor.path_edit);
      if (!path || !can_hold_file(*path)) return ui("cannot open '" + s_.editor.path_edit + "'");
      open_in_editor(*path, false);
      return ui("opened " + *path);
    }
    if (id == "editor.save") return save_editor();
    if (id == "editor.clear") {
      s_.editor.buffer.clear();
      s_.editor.cursor = 0;
      return ui("document cleared");
    }
    if (id == "editor.buffer") return focus_field(id, false);
    return invalid("unhandled element " + id);
  }

  Result key_editor(const std::string& combo) {
    if (combo == "ctrl+s") return save_editor();
    if (combo == "ctrl+a") return focus_field("editor.buffer", true);
    if (combo == "ctrl+end") {
      s_.editor.cursor = s_.editor.buffer.size();
      return focus_field("editor.buffer", false);
    }
    if (combo == "enter" && s_.focus.element_id) {
      if (*s_.focus.element_id == "editor.path") {
        auto path = resolve_path(kHomeDir, s_.editor.path_edit);
        if (!path || !can_hold_file(*path)) return invalid("cannot open '" + s_.editor.path_edit + "'");
        open_in_editor(*path, true);
        return ui("opened " + *path);
      }
      if (*s_.focus.element_id == "editor.buffer") return type("\n");
    }
    return invalid("no binding for " + combo + " in editor");
  }

  // ---------------------------------------------------------------- sheet
  Result click_sheet(const std::string& id) {
    if (id == "sheet.new") {
      s_.sheet.open_path = std::string(kHomeDir) + "/Untitled.csv";
      s_.sheet.cells.clear();
      return ui("new sheet");
    }
    if (id == "sheet.clear") {
      const std::string ref = s_.focus.element_id->substr(layout::kCellPrefix.size());
      s_.sheet.cells.erase(ref);
      return mutate("cell " + ref + " cleared");
    }
    if (starts_with(id, layout::kCellPrefix)) return focus_field(id, true);
    return invalid("unhandled element " + id);
  }

  Result key_sheet(const std::string& combo) {
    if (combo == "ctrl+g") return open_prompt(PromptKind::goto_cell);
    if (combo == "ctrl+n") {
      if (s_.sheet.open_path) return invalid("sheet already open");
      return click_sheet("sheet.new");
    }
    const bool on_cell = s_.focus.element_id && starts_with(*s_.focus.element_id, layout::kCellPrefix);
    if (combo == "delete" && on_cell) {
      const std::string ref = s_.focus.element_id->substr(layout::kCellPrefix.size());
      s_.sheet.cells.erase(ref);
      s_.focus.select_all = false;
      return mutate("cell " + ref + " cleared");
    }
    if (combo == "enter" && on_cell) {
      const std::string ref = s_.focus.element_id->substr(layout::kCellPrefix.size());
      const int row = std::stoi(ref.substr(1));
      const std::string below = ref.substr(0, 1) + std::to_string(row + 1);
      if (!layout::cell_on_grid(below)) return invalid("no cell below " + ref);
      return focus_field(std::string(layout::kCellPrefix) + below, true);
    }
    return invalid("no binding for " + combo + " in sheet");
  }

  WorldState& s_;
};

}  // namespace

void sanitize_focus(WorldState& state) {
  // Lists may have scrolled or shrunk under the focused element.
  if (state.focus.element_id && render(state).find(*state.focus.element_id) == nullptr) {
    state.focus.element_id.reset();
    state.focus.select_all = false;
  }
}

StepOutcome apply_primitive(const WorldState& state, const PrimitiveAction& action) {
  WorldState next = state;
  Machine machine(next);
  Result r = std::visit(
      [&machine](const auto& a) -> Result {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Click>) return machine.click(a.x, a.y, false);
        else if constexpr (std::is_same_v<T, DoubleClick>) return machine.click(a.x, a.y, true);
        else if constexpr (std::is_same_v<T, TypeText>) return machine.type(a.text);
        else if constexpr (std::is_same_v<T, KeyPress>) return machine.key(a.combo);
        else return machine.scroll(a.dy);
      },
      action);
  StepOutcome out;
  if (r.invalid) {
    out.next_state = state;
    out.invalid = true;
  } else {
    sanitize_focus(next);
    out.next_state = std::move(next);
  }
  out.next_state.step_counter = state.step_counter + 1;
  out.effect_log = std::move(r.effect);
  return out;
}

}  // namespace hcua::world
