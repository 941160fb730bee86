#include <algorithm>
#include <sstream>
#include <tuple>

#include "hcua/world/world.hpp"
#include "layout.hpp"

namespace hcua::world {

namespace {

class ScreenBuilder {
 public:
  explicit ScreenBuilder(const WorldState& state) : state_(state) {}

  void add(std::string id, Role role, std::string label, std::string value, BBox box,
           bool checked = false, bool disabled = false) {
    ScreenElement e;
    e.state_flags.focused = state_.focus.element_id && *state_.focus.element_id == id;
    e.state_flags.checked = checked;
    e.state_flags.disabled = disabled;
    e.id = std::move(id);
    e.role = role;
    e.label = std::move(label);
    e.value = std::move(value);
    e.bbox = box;
    elements_.push_back(std::move(e));
  }

  bool focused(std::string_view id) const {
    return state_.focus.element_id && *state_.focus.element_id == id;
  }

  Screen finish(App active) && {
    std::sort(elements_.begin(), elements_.end(), [](const ScreenElement& a, const ScreenElement& b) {
      return std::tie(a.bbox.y0, a.bbox.x0, a.id) < std::tie(b.bbox.y0, b.bbox.x0, b.id);
    });
    return Screen{std::move(elements_), active};
  }

 private:
  const WorldState& state_;
  std::vector<ScreenElement> elements_;
};

std::vector<std::pair<std::string, bool>> directory_entries(const WorldState& s,
                                                            const std::string& dir) {
  std::vector<std::pair<std::string, bool>> out;
  for (const auto& [path, node] : s.filesystem) {
    if (path != "/" && parent_path(path) == dir) out.emplace_back(base_name(path), node.is_dir);
  }
  return out;
}

void render_files(const WorldState& s, ScreenBuilder& b) {
  const auto& v = s.files;
  b.add("files.location", Role::text_field, "Location",
        b.focused("files.location") ? v.location_edit : v.cwd, layout::kFilesLocation);
  b.add("files.name", Role::text_field, "Name", v.name_edit, layout::kFilesName);
  const bool has_sel = v.selected.has_value();
  const std::array<std::tuple<const char*, const char*, bool>, 6> buttons = {{
      {"files.new_folder", "New Folder", false},
      {"files.new_file", "New File", false},
      {"files.delete", "Delete", !has_sel},
      {"files.up", "Up", v.cwd == "/"},
      {"files.copy_path", "Copy Path", !has_sel},
      {"files.open", "Open", !has_sel},
  }};
  for (std::size_t i = 0; i < buttons.size(); ++i) {
    const auto& [id, label, disabled] = buttons[i];
    b.add(id, Role::button, label, "", layout::files_button_box(i), false, disabled);
  }
  const auto entries = directory_entries(s, v.cwd);
  for (std::size_t row = 0; row < layout::kListRows; ++row) {
    const std::size_t index = v.scroll + row;
    if (index >= entries.size()) break;
    const auto& [name, is_dir] = entries[index];
    b.add(std::string(layout::kFilesEntryPrefix) + name, Role::list_item, name,
          is_dir ? "folder" : "file", layout::list_row_box(row), v.selected && *v.selected == name);
  }
}

void render_browser(const WorldState& s, ScreenBuilder& b) {
  const auto& br = s.browser;
  b.add("browser.back", Role::button, "Back", "", layout::kBrowserBack, false, br.history.size() < 2);
  b.add("browser.address", Role::text_field, "Address",
        b.focused("browser.address") ? br.address_edit : br.current_url, layout::kBrowserAddress);
  b.add("browser.go", Role::button, "Go", "", layout::kBrowserGo);
  b.add("browser.bookmark_name", Role::text_field, "Bookmark name", br.bookmark_name_edit,
        layout::kBookmarkName);
  b.add("browser.bookmark_folder", Role::text_field, "Bookmark folder", br.bookmark_folder_edit,
        layout::kBookmarkFolder);
  b.add("browser.add_bookmark", Role::button, "Add Bookmark", "", layout::kAddBookmark, false,
        br.current_url.empty() && br.bookmark_name_edit.empty());
  b.add("browser.add_folder", Role::button, "Add Folder", "", layout::kAddFolder, false,
        br.bookmark_name_edit.empty());
  for (std::size_t row = 0; row < layout::kListRows; ++row) {
    const std::size_t index = br.scroll + row;
    if (index >= br.bookmarks.size()) break;
    const auto& bm = br.bookmarks[index];
    b.add(std::string(layout::kBookmarkPrefix) + std::to_string(index), Role::link, bm.name,
          bm.folder + " | " + (bm.url.empty() ? std::string("(folder)") : bm.url),
          layout::list_row_box(row));
  }
}

void render_editor(const WorldState& s, ScreenBuilder& b) {
  const auto& ed = s.editor;
  b.add("editor.path", Role::text_field, "Path",
        b.focused("editor.path") ? ed.path_edit : ed.open_path.value_or(""), layout::kEditorPath);
  b.add("editor.open", Role::button, "Open", "", layout::kEditorOpen);
  b.add("editor.save", Role::button, "Save", "", layout::kEditorSave, false, !ed.open_path);
  b.add("editor.clear", Role::button, "Clear", "", layout::kEditorClear);
  b.add("editor.buffer", Role::text_field, "Document", ed.buffer, layout::kEditorBuffer);
}

void render_sheet(const WorldState& s, ScreenBuilder& b) {
  if (!s.sheet.open_path) {
    b.add("sheet.new", Role::button, "New Sheet", "", layout::kSheetButton);
    return;
  }
  const bool cell_focused =
      s.focus.element_id && s.focus.element_id->rfind(layout::kCellPrefix, 0) == 0;
  b.add("sheet.clear", Role::button, "Clear Cell", "", layout::kSheetButton, false, !cell_focused);
  for (int row = 1; row <= layout::kSheetRows; ++row) {
    for (int col = 0; col < layout::kSheetColumns; ++col) {
      const std::string ref = layout::cell_ref(col, row);
      auto it = s.sheet.cells.find(ref);
      b.add(std::string(layout::kCellPrefix) + ref, Role::cell, ref,
            it == s.sheet.cells.end() ? std::string{} : scalar_text(it->second),
            layout::cell_box(col, row));
    }
  }
}

void render_settings(const WorldState& s, ScreenBuilder& b) {
  std::size_t row = 0;
  for (const auto& [key, value] : s.settings) {
    if (row >= layout::kSettingsRows) break;
    const std::string name = key.first + "." + key.second;
    b.add(std::string(layout::kSettingPrefix) + name, Role::text_field, name, value,
          layout::settings_row_box(row++));
  }
}

}  // namespace

Screen render(const WorldState& state) {
  ScreenBuilder b(state);
  for (std::size_t i = 0; i < kAllApps.size(); ++i) {
    const App app = kAllApps[i];
    b.add(layout::tab_id(app), Role::tab, std::string(layout::tab_label(app)), "",
          layout::tab_box(i), state.focus.app == app);
  }
  switch (state.focus.app) {
    case App::files: render_files(state, b); break;
    case App::browser: render_browser(state, b); break;
    case App::editor: render_editor(state, b); break;
    case App::sheet: render_sheet(state, b); break;
    case App::settings: render_settings(state, b); break;
  }
  if (state.prompt) {
    b.add(std::string(layout::kPromptId), Role::text_field,
          std::string(layout::prompt_label(state.prompt->kind)), state.prompt->text,
          layout::kPromptBox);
  }
  return std::move(b).finish(state.focus.app);
}

const ScreenElement* Screen::find(std::string_view id) const {
  for (const auto& e : elements) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const ScreenElement* Screen::hit(int x, int y) const {
  for (const auto& e : elements) {
    if (e.bbox.contains(x, y)) return &e;
  }
  return nullptr;
}

std::string screen_text(const Screen& screen) {
  std::ostringstream out;
  out << "active_app=" << app_name(screen.active_app) << '\n';
  for (const auto& e : screen.elements) {
    out << e.id << " [" << role_name(e.role) << "] \"" << e.label << '"';
    if (!e.value.empty()) out << " = \"" << e.value << '"';
    out << " @" << e.bbox.x0 << ',' << e.bbox.y0 << ',' << e.bbox.x1 << ',' << e.bbox.y1;
    if (e.state_flags.focused) out << " focused";
    if (e.state_flags.checked) out << " checked";
    if (e.state_flags.disabled) out << " disabled";
    out << '\n';
  }
  return out.str();
}

}  // namespace hcua::world
