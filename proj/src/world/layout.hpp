#pragma once

// Fixed geometry of the virtual 1280x800 screen. Every region below is
// disjoint from every other one.

#include <string>
#include <string_view>

#include "hcua/world/world.hpp"

namespace hcua::world::layout {

inline constexpr std::size_t kListRows = 14;  // file list and bookmark list
inline constexpr std::size_t kSettingsRows = 16;
inline constexpr int kSheetColumns = 6;       // A..F
inline constexpr int kSheetRows = 12;         // 1..12

inline constexpr BBox tab_box(std::size_t index) {
  const int x0 = 10 + static_cast<int>(index) * 130;
  return {x0, 4, x0 + 120, 40};
}
inline constexpr BBox kPromptBox{10, 760, 1270, 792};

inline constexpr BBox list_row_box(std::size_t row) {
  const int y0 = 130 + static_cast<int>(row) * 40;
  return {10, y0, 1270, y0 + 34};
}

// Files
inline constexpr BBox kFilesLocation{10, 50, 630, 82};
inline constexpr BBox kFilesName{640, 50, 1270, 82};
inline constexpr BBox files_button_box(std::size_t index) {
  const int x0 = 10 + static_cast<int>(index) * 170;
  return {x0, 90, x0 + 160, 122};
}

// Browser
inline constexpr BBox kBrowserBack{10, 50, 110, 82};
inline constexpr BBox kBrowserAddress{120, 50, 1100, 82};
inline constexpr BBox kBrowserGo{1110, 50, 1270, 82};
inline constexpr BBox kBookmarkName{10, 90, 400, 122};
inline constexpr BBox kBookmarkFolder{410, 90, 800, 122};
inline constexpr BBox kAddBookmark{810, 90, 1030, 122};
inline constexpr BBox kAddFolder{1040, 90, 1270, 122};

// Editor
inline constexpr BBox kEditorPath{10, 50, 800, 82};
inline constexpr BBox kEditorOpen{810, 50, 960, 82};
inline constexpr BBox kEditorSave{970, 50, 1110, 82};
inline constexpr BBox kEditorClear{1120, 50, 1270, 82};
inline constexpr BBox kEditorBuffer{10, 90, 1270, 740};

// Sheet
inline constexpr BBox kSheetButton{10, 50, 220, 82};
inline constexpr BBox cell_box(int column, int row) {  // column 0-based, row 1-based
  const int x0 = 10 + column * 210;
  const int y0 = 90 + (row - 1) * 52;
  return {x0, y0, x0 + 200, y0 + 46};
}

// Settings
inline constexpr BBox settings_row_box(std::size_t row) {
  const int y0 = 50 + static_cast<int>(row) * 42;
  return {10, y0, 1270, y0 + 36};
}

// Element ids
inline constexpr std::string_view kPromptId = "prompt";
inline constexpr std::string_view kFilesEntryPrefix = "files.entry:";
inline constexpr std::string_view kBookmarkPrefix = "browser.bookmark:";
inline constexpr std::string_view kCellPrefix = "sheet.cell:";
inline constexpr std::string_view kSettingPrefix = "settings.field:";

inline std::string tab_id(App app) { return "tab." + std::string(app_name(app)); }
std::string_view tab_label(App app);
std::string_view prompt_label(PromptKind kind);

/// Cell refs that have a place on the grid (A1..F12).
bool cell_on_grid(std::string_view ref);
std::string cell_ref(int column, int row);

}  // namespace hcua::world::layout
