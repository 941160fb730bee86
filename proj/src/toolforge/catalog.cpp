#include "hcua/toolforge/tool.hpp"

namespace hcua::toolforge {

namespace {

using world::App;

ToolParam str(std::string name, std::string doc, bool required = true) {
  return ToolParam{std::move(name), ScalarType::string, required, std::move(doc)};
}

KeyOp key(std::string combo) { return KeyOp{std::move(combo)}; }
TypeOp type(std::string text) { return TypeOp{std::move(text)}; }
StateOp state(StateTarget target, std::vector<std::string> address, std::string value = {}) {
  return StateOp{target, std::move(address), std::move(value)};
}

ToolSpec tool(std::string name, App domain, ToolSource source, std::string doc,
              std::vector<ToolParam> params, std::vector<BodyOp> body) {
  return ToolSpec{std::move(name), std::move(doc), std::move(params), std::move(body), source, domain};
}

}  // namespace

ToolRegistry builtin_registry() {
  constexpr auto doc_src = ToolSource::documentation;
  constexpr auto int_src = ToolSource::integrated;
  ToolRegistry r;

  // System (file manager)
  r.add(tool("system.create_file", App::files, int_src,
             "Create a text file, or overwrite it, creating parent folders as needed.",
             {str("path", "absolute path of the file"), str("content", "text to write", false)},
             {state(StateTarget::create_file, {"{path}"}, "{content}")}));
  r.add(tool("system.create_folder", App::files, int_src, "Create a folder and any missing parents.",
             {str("path", "absolute path of the folder")}, {state(StateTarget::mkdir, {"{path}"})}));
  r.add(tool("system.delete_path", App::files, int_src, "Delete a file or a folder with its contents.",
             {str("path", "absolute path to delete")}, {state(StateTarget::delete_path, {"{path}"})}));
  r.add(tool("system.append_to_file", App::files, int_src, "Append text to the end of an existing file.",
             {str("path", "absolute path of the file"), str("text", "text to append")},
             {state(StateTarget::append_file, {"{path}"}, "{text}")}));
  r.add(tool("system.copy_text_to_clipboard", App::files, int_src, "Put the given text on the clipboard.",
             {str("text", "text to copy")}, {state(StateTarget::clipboard, {}, "{text}")}));
  r.add(tool("system.open_app", App::files, int_src,
             "Bring an application to the front: files, browser, editor, sheet or settings.",
             {str("app", "application name")}, {state(StateTarget::open_app, {"{app}"})}));
  r.add(tool("files.go_home", App::files, doc_src, "Show the home folder in the file manager (Alt+Home).", {},
             {key("alt+1"), key("alt+home")}));
  r.add(tool("files.go_up", App::files, doc_src, "Show the parent folder in the file manager (Alt+Up).", {},
             {key("alt+1"), key("alt+up")}));

  // Chrome (browser)
  r.add(tool("chrome.open_url", App::browser, doc_src, "Open a URL in the current tab (Ctrl+L, type, Enter).",
             {str("url", "address to open")}, {key("ctrl+l"), type("{url}"), key("enter")}));
  r.add(tool("chrome.go_back", App::browser, doc_src, "Go back one page in history (Alt+Left).", {},
             {key("alt+2"), key("alt+left")}));
  r.add(tool("chrome.create_bookmark_folder", App::browser, doc_src,
             "Create a folder on the bookmarks bar (Ctrl+Shift+O, type the name, Enter).",
             {str("name", "folder name")}, {key("ctrl+shift+o"), type("{name}"), key("enter")}));
  r.add(tool("chrome.add_bookmark", App::browser, int_src, "Add a bookmark for a URL inside a bookmark folder.",
             {str("name", "bookmark name"), str("url", "bookmarked address"),
              str("folder", "containing folder, e.g. Bookmarks bar")},
             {state(StateTarget::bookmark, {"{name}", "{folder}"}, "{url}")}));
  r.add(tool("chrome.bookmark_current_page", App::browser, doc_src,
             "Bookmark the current page on the bookmarks bar (Ctrl+D).", {}, {key("alt+2"), key("ctrl+d")}));
  r.add(tool("chrome.open_history_page", App::browser, int_src, "Open the browsing history page.", {},
             {state(StateTarget::url, {}, "chrome://history")}));
  r.add(tool("chrome.open_downloads_page", App::browser, int_src, "Open the downloads page.", {},
             {state(StateTarget::url, {}, "chrome://downloads")}));

  // VS Code / Writer (editor)
  r.add(tool("vscode.set_theme", App::editor, doc_src, "Set the color theme (Ctrl+K, Ctrl+T, type, Enter).",
             {str("theme", "theme name, e.g. Dark+")},
             {key("ctrl+k"), key("ctrl+t"), type("{theme}"), key("enter")}));
  r.add(tool("vscode.add_keybinding", App::editor, doc_src, "Create or update a keybinding for a command.",
             {str("key", "key combination, e.g. ctrl+j"), str("command", "command identifier")},
             {key("ctrl+k"), key("ctrl+s"), type("{key}={command}"), key("enter")}));
  r.add(tool("editor.open_file", App::editor, doc_src, "Open a file in the editor (Ctrl+O, type the path, Enter).",
             {str("path", "absolute path of the file")}, {key("ctrl+o"), type("{path}"), key("enter")}));
  r.add(tool("editor.save", App::editor, doc_src, "Save the open document (Ctrl+S).", {},
             {key("alt+3"), key("ctrl+s")}));
  r.add(tool("editor.replace_document", App::editor, doc_src,
             "Replace the whole open document with new text and save it.", {str("text", "new document text")},
             {key("alt+3"), key("ctrl+a"), type("{text}"), key("ctrl+s")}));
  r.add(tool("editor.append_text", App::editor, doc_src, "Type text at the end of the open document.",
             {str("text", "text to append")}, {key("alt+3"), key("ctrl+end"), type("{text}")}));
  r.add(tool("editor.write_file", App::editor, int_src, "Replace the contents of an existing text file.",
             {str("path", "absolute path of the file"), str("content", "new contents")},
             {state(StateTarget::file_content, {"{path}"}, "{content}")}));
  r.add(tool("writer.set_default_font", App::editor, int_src, "Set the default document font.",
             {str("font", "font family name")}, {state(StateTarget::setting, {"writer", "default_font"}, "{font}")}));

  // Calc (sheet)
  r.add(tool("set_cell_values", App::sheet, int_src, "Set multiple cell values in a spreadsheet.",
             {str("cells", "JSON object mapping cell references to values"), str("sheet", "sheet name")},
             {state(StateTarget::cells_json, {"{sheet}"}, "{cells}")}));
  r.add(tool("calc.set_cell_value", App::sheet, doc_src, "Go to a cell (Ctrl+G) and type a value into it.",
             {str("cell", "cell reference"), str("value", "value to enter")},
             {key("alt+4"), key("ctrl+g"), type("{cell}"), key("enter"), type("{value}")}));
  r.add(tool("calc.clear_cell", App::sheet, doc_src, "Go to a cell (Ctrl+G) and clear it (Delete).",
             {str("cell", "cell reference")},
             {key("alt+4"), key("ctrl+g"), type("{cell}"), key("enter"), key("delete")}));
  r.add(tool("calc.go_to_cell", App::sheet, doc_src, "Select a cell by reference (Ctrl+G).",
             {str("cell", "cell reference")}, {key("alt+4"), key("ctrl+g"), type("{cell}"), key("enter")}));
  r.add(tool("calc.new_sheet", App::sheet, doc_src, "Start a new empty spreadsheet (Ctrl+N).", {},
             {key("alt+4"), key("ctrl+n")}));

  // OS settings
  r.add(tool("settings.set_value", App::settings, int_src, "Set any application setting.",
             {str("app", "settings namespace"), str("key", "setting key"), str("value", "new value")},
             {state(StateTarget::setting, {"{app}", "{key}"}, "{value}")}));
  r.add(tool("os.set_wallpaper", App::settings, int_src, "Use an image file as the desktop wallpaper.",
             {str("path", "absolute path of the image")},
             {state(StateTarget::setting, {"desktop", "wallpaper"}, "{path}")}));
  r.add(tool("os.set_dark_mode", App::settings, int_src, "Turn the system dark mode on or off.",
             {ToolParam{"enabled", ScalarType::boolean, true, "true for dark mode"}},
             {state(StateTarget::setting, {"desktop", "dark_mode"}, "{enabled}")}));
  r.add(tool("os.set_timezone", App::settings, int_src, "Set the system time zone.",
             {str("zone", "IANA zone name, e.g. Europe/Berlin")},
             {state(StateTarget::setting, {"system", "timezone"}, "{zone}")}));
  r.add(tool("settings.open_panel", App::settings, doc_src, "Show the settings panel (Alt+5).", {}, {key("alt+5")}));
  return r;
}

}  // namespace hcua::toolforge
