#include <algorithm>

#include "hcua/tasksynth/synth.hpp"

namespace hcua::tasksynth {

namespace {

using verify::AtomicEvaluator;
using world::WorldState;

std::string q(const std::string& s) { return nlohmann::json(s).dump(); }

std::string child_path(const std::string& dir, const std::string& name) {
  return dir == "/" ? "/" + name : dir + "/" + name;
}

bool exists(const WorldState& s, const std::string& path) { return s.filesystem.count(path) != 0; }

template <typename T>
std::vector<T> shuffled(std::vector<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
  return items;
}

std::optional<Proposal> single(const AtomicEvaluator& a, std::optional<std::string> text = std::nullopt) {
  auto cfg = verify::compose({a}, verify::Combinator::all);
  if (!text) text = phrase_config(cfg);
  if (!text) return std::nullopt;
  return Proposal{*text, std::move(cfg)};
}

std::optional<Proposal> new_entry(const WorldState& s, Rng& rng, bool spreadsheet) {
  const std::string& dir = s.files.cwd;
  for (const auto& stem : shuffled(fixture_corpus().new_names, rng)) {
    const std::string name = spreadsheet ? stem + ".csv" : stem;
    const std::string path = child_path(dir, name);
    if (exists(s, path)) continue;
    const std::string text = std::string(spreadsheet ? "Create a new spreadsheet named " : "Create a new folder named ") +
                             q(name) + " in " + q(dir) + ".";
    return single(verify::file_exists(path), text);
  }
  return std::nullopt;
}

std::optional<Proposal> copy_path(const WorldState& s, Rng& rng) {
  std::vector<std::string> files;
  for (const auto& [path, node] : s.filesystem) {
    if (!node.is_dir && world::parent_path(path) == s.files.cwd && path != s.clipboard) {
      files.push_back(path);
    }
  }
  if (files.empty()) return std::nullopt;
  // Prefer the selected entry, the one a user would be looking at.
  if (s.files.selected) {
    const std::string sel = child_path(s.files.cwd, *s.files.selected);
    if (std::find(files.begin(), files.end(), sel) != files.end()) return single(verify::clipboard_equals(sel));
  }
  return single(verify::clipboard_equals(files[rng.below(files.size())]));
}

std::optional<Proposal> bookmark_folder(const WorldState& s) {
  // Fixed preference order, so the first choice is always "Favorites".
  for (const auto& name : fixture_corpus().bookmark_bar_folders) {
    const bool taken = std::any_of(s.browser.bookmarks.begin(), s.browser.bookmarks.end(), [&](const auto& b) {
      return b.name == name && b.folder == world::kDefaultBookmarkFolder;
    });
    if (!taken) return single(verify::bookmark_exists(name, std::string(world::kDefaultBookmarkFolder)));
  }
  return std::nullopt;
}

std::optional<Proposal> open_url(const WorldState& s, Rng& rng) {
  for (const auto& url : shuffled(fixture_corpus().urls, rng)) {
    if (url != s.browser.current_url) return single(verify::url_equals(url));
  }
  return std::nullopt;
}

std::string trimmed(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

std::optional<Proposal> replace_contents(const WorldState& s, Rng& rng) {
  if (!s.editor.open_path) return std::nullopt;
  const std::string& path = *s.editor.open_path;
  auto parent = s.filesystem.find(world::parent_path(path));
  if (parent == s.filesystem.end() || !parent->second.is_dir) return std::nullopt;
  auto it = s.filesystem.find(path);
  if (it != s.filesystem.end() && it->second.is_dir) return std::nullopt;
  const std::string current = it == s.filesystem.end() ? std::string("\x01") : trimmed(it->second.content);
  for (const auto& text : shuffled(fixture_corpus().sentences, rng)) {
    if (text != current) return single(verify::file_content_equals(path, text));
  }
  return std::nullopt;
}

std::optional<std::string> setting_value(const WorldState& s, const std::string& app, const std::string& key) {
  auto it = s.settings.find({app, key});
  return it == s.settings.end() ? std::nullopt : std::optional<std::string>(it->second);
}

std::optional<Proposal> set_theme(const WorldState& s, Rng& rng) {
  const auto current = setting_value(s, "editor", "theme");
  for (const auto& theme : shuffled(fixture_corpus().themes, rng)) {
    if (theme != current) return single(verify::setting_equals("editor", "theme", theme));
  }
  return std::nullopt;
}

std::optional<Proposal> set_cell(const WorldState& s, Rng& rng) {
  if (!s.sheet.open_path) return std::nullopt;
  const std::string ref = std::string(1, static_cast<char>('A' + rng.below(4))) + std::to_string(1 + rng.below(8));
  auto it = s.sheet.cells.find(ref);
  const std::string current = it == s.sheet.cells.end() ? std::string("\x01") : scalar_text(it->second);
  for (const auto& v : shuffled(fixture_corpus().cell_values, rng)) {
    if (scalar_text(v) != current) return single(verify::cell_value_equals(ref, v));
  }
  return std::nullopt;
}

/// Candidate replacement values for a known setting.
std::vector<std::string> setting_pool(const std::string& app, const std::string& key) {
  const FixtureCorpus& c = fixture_corpus();
  if (app == "editor" && key == "theme") return c.themes;
  if (app == "editor" && key == "font_size") return {"12", "16", "18"};
  if (app == "writer" && key == "default_font") return c.fonts;
  if (app == "desktop" && key == "dark_mode") return {"true", "false"};
  if (app == "desktop" && key == "wallpaper") return {"/home/user/Pictures/wallpaper.png"};
  if (app == "system" && key == "timezone") return c.timezones;
  return {};
}

std::optional<Proposal> change_setting(const WorldState& s, Rng& rng) {
  std::vector<std::pair<world::SettingKey, std::string>> entries(s.settings.begin(), s.settings.end());
  for (const auto& [key, value] : shuffled(entries, rng)) {
    for (const auto& v : shuffled(setting_pool(key.first, key.second), rng)) {
      if (v != value) return single(verify::setting_equals(key.first, key.second, v));
    }
  }
  return std::nullopt;
}

world::App template_app(Template t) {
  switch (t) {
    case Template::new_folder:
    case Template::new_spreadsheet:
    case Template::copy_path:
      return world::App::files;
    case Template::bookmark_bar_folder:
    case Template::open_url:
      return world::App::browser;
    case Template::replace_contents:
    case Template::set_theme:
      return world::App::editor;
    case Template::set_cell:
      return world::App::sheet;
    case Template::change_setting:
      return world::App::settings;
  }
  return world::App::files;
}

std::optional<Proposal> instantiate(Template t, const WorldState& s, Rng& rng) {
  switch (t) {
    case Template::new_folder: return new_entry(s, rng, false);
    case Template::new_spreadsheet: return new_entry(s, rng, true);
    case Template::copy_path: return copy_path(s, rng);
    case Template::bookmark_bar_folder: return bookmark_folder(s);
    case Template::open_url: return open_url(s, rng);
    case Template::replace_contents: return replace_contents(s, rng);
    case Template::set_theme: return set_theme(s, rng);
    case Template::set_cell: return set_cell(s, rng);
    case Template::change_setting: return change_setting(s, rng);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> TemplateProposer::describe(const verify::EvaluatorConfig& cfg, std::uint64_t) const {
  return phrase_config(cfg);
}

std::optional<Proposal> TemplateProposer::propose(const WorldState& state, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<Template> candidates;
  for (Template t : library_) {
    if (template_app(t) == state.focus.app) candidates.push_back(t);
  }
  for (Template t : shuffled(candidates, rng)) {
    if (auto p = instantiate(t, state, rng)) return p;
  }
  return std::nullopt;
}

}  // namespace hcua::tasksynth
