#include <set>

#include "doctest.h"
#include "hcua/core/errors.hpp"
#include "hcua/core/rng.hpp"
#include "hcua/world/world.hpp"

using namespace hcua;
using namespace hcua::world;

namespace {

WorkspaceManifest desk_manifest() {
  WorkspaceManifest m;
  m.files["/home/user/a.txt"] = "hi";
  m.files["/home/user/Documents/notes.md"] = "# notes\n";
  m.dirs.push_back("/home/user/Downloads");
  m.bookmarks.push_back({"Docs", "https://docs.python.org", std::string(kDefaultBookmarkFolder)});
  m.bookmarks.push_back({"News", "https://news.example.com", "Reading"});
  m.settings[{"editor", "theme"}] = "Light";
  m.start_url = "https://start.example.com";
  m.cells["A1"] = std::string("name");
  return m;
}

StepOutcome click_id(const WorldState& s, std::string_view id) {
  const Screen screen = render(s);
  const ScreenElement* e = screen.find(id);
  REQUIRE_MESSAGE(e != nullptr, "missing element " << id);
  auto [x, y] = e->bbox.center();
  return apply_primitive(s, Click{x, y});
}

WorldState press(WorldState s, std::initializer_list<std::string_view> keys) {
  for (auto k : keys) s = apply_primitive(s, KeyPress{std::string(k)}).next_state;
  return s;
}

const std::array<std::string_view, 14> kWalkKeys = {
    "alt+1", "alt+2", "alt+3", "alt+4", "alt+5", "enter", "escape", "backspace",
    "ctrl+k", "ctrl+t", "ctrl+o", "ctrl+shift+o", "delete", "ctrl+s"};
const std::array<std::string_view, 5> kWalkTexts = {"x", "Favorites", "/home/user/b.txt", "42", "dark"};

PrimitiveAction random_action(Rng& rng, const WorldState& s) {
  const Screen screen = render(s);
  switch (rng.below(6)) {
    case 0:
    case 1: {
      const auto& e = screen.elements[rng.below(screen.elements.size())];
      auto [x, y] = e.bbox.center();
      return Click{x, y};
    }
    case 2: return KeyPress{std::string(kWalkKeys[rng.below(kWalkKeys.size())])};
    case 3: return TypeText{std::string(kWalkTexts[rng.below(kWalkTexts.size())])};
    case 4: return Scroll{static_cast<int>(rng.below(5)) - 2};
    default:
      return Click{static_cast<int>(rng.below(kScreenWidth)), static_cast<int>(rng.below(kScreenHeight))};
  }
}

std::vector<WorldState> random_states(std::uint64_t seed, std::size_t walks, std::size_t depth) {
  Rng rng(seed);
  std::vector<WorldState> out;
  for (std::size_t w = 0; w < walks; ++w) {
    WorldState s = reset(seed + w, desk_manifest());
    out.push_back(s);
    for (std::size_t d = 0; d < depth; ++d) {
      s = apply_primitive(s, random_action(rng, s)).next_state;
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("reset seeds exactly the manifest") {
  const WorldState empty = reset(1, WorkspaceManifest{});
  CHECK(empty.filesystem.empty());
  CHECK(empty.browser.current_url.empty());
  CHECK(empty.browser.bookmarks.empty());
  CHECK(empty.focus.app == App::files);
  CHECK(empty.step_counter == 0);

  WorkspaceManifest m;
  m.files["/home/user/a.txt"] = "hi";
  const WorldState s = reset(1, m);
  CHECK(s.filesystem.at("/home/user/a.txt").content == "hi");
  CHECK(s.filesystem.at("/home/user").is_dir);
  CHECK(reset(1, desk_manifest()) == reset(1, desk_manifest()));
}

TEST_CASE("reset rejects malformed paths and names the entry") {
  WorkspaceManifest m;
  m.files["/home//user/a.txt"] = "x";
  try {
    reset(1, m);
    FAIL("expected ManifestError");
  } catch (const ManifestError& e) {
    CHECK(e.entry() == "files//home//user/a.txt");
  }
  WorkspaceManifest rel;
  rel.files["home/a.txt"] = "x";
  CHECK_THROWS_AS(reset(1, rel), ManifestError);
  WorkspaceManifest dots;
  dots.dirs.push_back("/home/../etc");
  CHECK_THROWS_AS(reset(1, dots), ManifestError);
  WorkspaceManifest clash;
  clash.files["/home/user/a"] = "x";
  clash.files["/home/user/a/b"] = "y";
  CHECK_THROWS_AS(reset(1, clash), ManifestError);
}

TEST_CASE("manifest json loader validates and roundtrips") {
  const auto m = desk_manifest();
  CHECK(manifest_from_json(manifest_to_json(m)) == m);
  CHECK_THROWS_AS(manifest_from_json(nlohmann::json{{"filez", {}}}), ManifestError);
  CHECK_THROWS_AS(manifest_from_json(nlohmann::json{{"cells", {{"1A", 3}}}}), ManifestError);
  CHECK_THROWS_AS(manifest_from_json(nlohmann::json{{"cells", {{"A1", {1, 2}}}}}), ManifestError);
  auto doc = nlohmann::json::parse(R"({"bookmarks":[{"name":"x","url":"u"}]})");
  CHECK(manifest_from_json(doc).bookmarks.at(0).folder == kDefaultBookmarkFolder);
}

TEST_CASE("manifest_from_state rebuilds the originating content") {
  for (const auto& s : random_states(7, 20, 15)) {
    const WorldState rebuilt = reset(s.rng_seed, manifest_from_state(s));
    CHECK(rebuilt.filesystem == s.filesystem);
    CHECK(rebuilt.browser.bookmarks == s.browser.bookmarks);
    CHECK(rebuilt.settings == s.settings);
    CHECK(rebuilt.clipboard == s.clipboard);
    CHECK(rebuilt.sheet.cells == (s.sheet.open_path ? s.sheet.cells : std::map<std::string, Scalar>{}));
  }
}

TEST_CASE("render shows one link per bookmark and is pure") {
  WorldState s = reset(1, desk_manifest());
  s = press(s, {"alt+2"});
  const Screen screen = render(s);
  std::vector<std::string> links;
  for (const auto& e : screen.elements) {
    if (e.role == Role::link) links.push_back(e.label);
  }
  CHECK(links == std::vector<std::string>{"Docs", "News"});
  CHECK(render(s) == screen);
}

// Hand-written expectation table for three apps of the desk fixture.
TEST_CASE("render rules on files, browser and editor") {
  struct Row {
    std::string_view id;
    Role role;
    std::string_view label;
    bool disabled;
  };
  const std::vector<Row> tabs = {{"tab.files", Role::tab, "Files", false},
                                 {"tab.browser", Role::tab, "Browser", false},
                                 {"tab.editor", Role::tab, "Editor", false},
                                 {"tab.sheet", Role::tab, "Sheet", false},
                                 {"tab.settings", Role::tab, "Settings", false}};
  auto expect = [&tabs](const Screen& screen, std::vector<Row> rows) {
    rows.insert(rows.begin(), tabs.begin(), tabs.end());
    REQUIRE(screen.elements.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CAPTURE(i);
      CHECK(screen.elements[i].id == rows[i].id);
      CHECK(screen.elements[i].role == rows[i].role);
      CHECK(screen.elements[i].label == rows[i].label);
      CHECK(screen.elements[i].state_flags.disabled == rows[i].disabled);
    }
  };
  const WorldState s = reset(1, desk_manifest());
  expect(render(s), {{"files.location", Role::text_field, "Location", false},
                     {"files.name", Role::text_field, "Name", false},
                     {"files.new_folder", Role::button, "New Folder", false},
                     {"files.new_file", Role::button, "New File", false},
                     {"files.delete", Role::button, "Delete", true},
                     {"files.up", Role::button, "Up", false},
                     {"files.copy_path", Role::button, "Copy Path", true},
                     {"files.open", Role::button, "Open", true},
                     {"files.entry:Documents", Role::list_item, "Documents", false},
                     {"files.entry:Downloads", Role::list_item, "Downloads", false},
                     {"files.entry:a.txt", Role::list_item, "a.txt", false}});
  expect(render(press(s, {"alt+2"})),
         {{"browser.back", Role::button, "Back", true},
          {"browser.address", Role::text_field, "Address", false},
          {"browser.go", Role::button, "Go", false},
          {"browser.bookmark_name", Role::text_field, "Bookmark name", false},
          {"browser.bookmark_folder", Role::text_field, "Bookmark folder", false},
          {"browser.add_bookmark", Role::button, "Add Bookmark", false},
          {"browser.add_folder", Role::button, "Add Folder", true},
          {"browser.bookmark:0", Role::link, "Docs", false},
          {"browser.bookmark:1", Role::link, "News", false}});

  // Editor open on /a.txt with focus in the editor: the document field is focused.
  WorkspaceManifest m;
  m.files["/a.txt"] = "alpha";
  WorldState e = reset(1, m);
  e = press(e, {"ctrl+o"});
  e = apply_primitive(e, TypeText{"/a.txt"}).next_state;
  e = press(e, {"enter"});
  const Screen screen = render(e);
  expect(screen, {{"editor.path", Role::text_field, "Path", false},
                  {"editor.open", Role::button, "Open", false},
                  {"editor.save", Role::button, "Save", false},
                  {"editor.clear", Role::button, "Clear", false},
                  {"editor.buffer", Role::text_field, "Document", false}});
  CHECK(e.focus.app == App::editor);
  CHECK(screen.find("editor.buffer")->state_flags.focused);
  CHECK(screen.find("editor.buffer")->value == "alpha");
}

TEST_CASE("New Folder click creates one directory") {
  const WorldState s = reset(1, desk_manifest());
  const StepOutcome out = click_id(s, "files.new_folder");
  CHECK_FALSE(out.invalid);
  CHECK(out.next_state.filesystem.size() == s.filesystem.size() + 1);
  CHECK(out.next_state.filesystem.at("/home/user/New Folder").is_dir);
  CHECK(out.effect_log.rfind("mutate:", 0) == 0);
  const StepOutcome again = click_id(out.next_state, "files.new_folder");
  CHECK(again.next_state.filesystem.count("/home/user/New Folder 2") == 1);
}

TEST_CASE("click on empty space is invalid and changes only the step counter") {
  const WorldState s = reset(1, desk_manifest());
  const StepOutcome out = apply_primitive(s, Click{0, 0});
  CHECK(out.invalid);
  CHECK(out.next_state.step_counter == s.step_counter + 1);
  CHECK(same_content(out.next_state, s));
}

TEST_CASE("typing appends to the focused document") {
  WorldState s = reset(1, WorkspaceManifest{});
  s = press(s, {"alt+3"});
  s = click_id(s, "editor.buffer").next_state;
  const StepOutcome out = apply_primitive(s, TypeText{"abc"});
  CHECK_FALSE(out.invalid);
  CHECK(out.next_state.editor.buffer == "abc");
  CHECK(apply_primitive(out.next_state, TypeText{"d"}).next_state.editor.buffer == "abcd");
  CHECK(apply_primitive(reset(1, WorkspaceManifest{}), TypeText{"abc"}).invalid);
}

TEST_CASE("shortcut tables") {
  WorldState s = reset(1, desk_manifest());
  SUBCASE("ctrl+k ctrl+t sets the editor theme") {
    s = press(s, {"ctrl+k", "ctrl+t"});
    REQUIRE(s.prompt);
    s = apply_primitive(s, TypeText{"Dark+"}).next_state;
    const auto out = apply_primitive(s, KeyPress{"enter"});
    CHECK(out.effect_log == "mutate: setting editor.theme = Dark+");
    CHECK(out.next_state.settings.at({"editor", "theme"}) == "Dark+");
    CHECK_FALSE(out.next_state.prompt);
  }
  SUBCASE("ctrl+shift+o creates a bookmark-bar folder") {
    s = press(s, {"ctrl+shift+o"});
    s = apply_primitive(s, TypeText{"Favorites"}).next_state;
    s = press(s, {"enter"});
    CHECK(*query(s, StateSelector::bookmark("Favorites", "Bookmarks bar")) == Scalar{true});
  }
  SUBCASE("ctrl+k ctrl+s binds a key") {
    s = press(s, {"ctrl+k", "ctrl+s"});
    s = apply_primitive(s, TypeText{"Ctrl+J=workbench.action.togglePanel"}).next_state;
    s = press(s, {"enter"});
    CHECK(s.settings.at({"keybindings", "ctrl+j"}) == "workbench.action.togglePanel");
  }
  SUBCASE("prompt rejects navigation keys and escape cancels") {
    s = press(s, {"ctrl+o"});
    CHECK(apply_primitive(s, KeyPress{"alt+2"}).invalid);
    s = press(s, {"escape"});
    CHECK_FALSE(s.prompt);
  }
  SUBCASE("goto cell with a bad reference leaves state unchanged") {
    s = press(s, {"alt+4", "ctrl+g"});
    s = apply_primitive(s, TypeText{"Z99"}).next_state;
    const auto out = apply_primitive(s, KeyPress{"enter"});
    CHECK(out.invalid);
    CHECK(same_content(out.next_state, s));
  }
  SUBCASE("modifier order is normalized") {
    CHECK(normalize_combo("Shift+Ctrl+O") == "ctrl+shift+o");
    CHECK(normalize_combo(" alt + F4 ") == "alt+f4");
  }
}

TEST_CASE("sheet cells take typed text and commit with enter") {
  WorldState s = reset(1, desk_manifest());
  s = press(s, {"alt+4", "ctrl+g"});
  s = apply_primitive(s, TypeText{"b2"}).next_state;
  s = press(s, {"enter"});
  s = apply_primitive(s, TypeText{"42"}).next_state;
  CHECK(s.sheet.cells.at("B2") == Scalar{std::int64_t{42}});
  s = press(s, {"enter"});
  CHECK(s.focus.element_id == std::optional<std::string>("sheet.cell:B3"));
  s = apply_primitive(s, TypeText{"hello"}).next_state;
  CHECK(*query(s, StateSelector::cell("B3")) == Scalar{std::string("hello")});
}

TEST_CASE("query examples") {
  const WorldState s = reset(1, desk_manifest());
  CHECK(*query(s, StateSelector::file_exists("/home/user/a.txt")) == Scalar{true});
  CHECK(*query(s, StateSelector::file_exists("/home/user/zzz")) == Scalar{false});
  CHECK_FALSE(query(reset(1, WorkspaceManifest{}), StateSelector::cell("B3")));
  CHECK_FALSE(query(s, StateSelector::file_content("/home/user/Documents")));
  CHECK_THROWS_AS(query(s, StateSelector::cell("3B")), SelectorError);
  CHECK_THROWS_AS(query(s, StateSelector{SelectorKind::url, {"extra"}}), SelectorError);

  // Three-step browser episode: focus address, type, enter.
  WorldState b = press(s, {"ctrl+l"});
  b = apply_primitive(b, TypeText{"https://docs.python.org"}).next_state;
  b = press(b, {"enter"});
  CHECK(*query(b, StateSelector::url()) == Scalar{std::string("https://docs.python.org")});
  CHECK(b.step_counter == 3);
}

TEST_CASE("screen invariants hold on random reachable states") {
  for (const auto& s : random_states(11, 30, 40)) {
    const Screen screen = render(s);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < screen.elements.size(); ++i) {
      const auto& a = screen.elements[i];
      CHECK(ids.insert(a.id).second);
      CHECK(a.bbox.x0 >= 0);
      CHECK(a.bbox.y0 >= 0);
      CHECK(a.bbox.x1 < kScreenWidth);
      CHECK(a.bbox.y1 < kScreenHeight);
      for (std::size_t j = i + 1; j < screen.elements.size(); ++j) {
        const auto& b = screen.elements[j];
        const bool overlap = a.bbox.x0 <= b.bbox.x1 && b.bbox.x0 <= a.bbox.x1 &&
                             a.bbox.y0 <= b.bbox.y1 && b.bbox.y0 <= a.bbox.y1;
        CHECK_FALSE(overlap);
      }
      auto [x, y] = a.bbox.center();
      CHECK(screen.hit(x, y) == &a);
    }
    if (s.focus.element_id) CHECK(screen.find(*s.focus.element_id) != nullptr);
    for (const auto& [path, node] : s.filesystem) CHECK(is_normalized_path(path));
    for (const auto& [ref, v] : s.sheet.cells) CHECK(is_cell_ref(ref));
  }
}

TEST_CASE("determinism of seeded action sequences") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto run = [seed] {
      Rng rng(seed);
      WorldState s = reset(seed, desk_manifest());
      for (int i = 0; i < 50; ++i) s = apply_primitive(s, random_action(rng, s)).next_state;
      return s;
    };
    CHECK(run() == run());
  }
}

TEST_CASE("invalid actions are total and inert") {
  Rng rng(99);
  std::size_t invalid_seen = 0;
  for (const auto& s : random_states(5, 20, 20)) {
    for (int i = 0; i < 20; ++i) {
      const PrimitiveAction a =
          rng.chance(0.5) ? PrimitiveAction{Click{static_cast<int>(rng.below(kScreenWidth)),
                                                  static_cast<int>(rng.below(kScreenHeight))}}
                          : random_action(rng, s);
      const StepOutcome out = apply_primitive(s, a);
      CHECK(out.next_state.step_counter == s.step_counter + 1);
      if (out.invalid) {
        ++invalid_seen;
        CHECK(same_content(out.next_state, s));
      }
    }
  }
  CHECK(invalid_seen > 0);
}

TEST_CASE("query has no side effects") {
  for (const auto& s : random_states(3, 5, 10)) {
    const Screen before = render(s);
    query(s, StateSelector::url());
    query(s, StateSelector::cell("A1"));
    query(s, StateSelector::setting("editor", "theme"));
    CHECK(render(s) == before);
  }
}
