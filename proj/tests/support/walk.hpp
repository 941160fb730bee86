#pragma once

// Shared fixtures for unit tests: a desk manifest and seeded random walks.

#include <array>
#include <string_view>
#include <vector>

#include "hcua/core/rng.hpp"
#include "hcua/world/world.hpp"

namespace testsupport {

inline hcua::world::WorkspaceManifest desk_manifest() {
  hcua::world::WorkspaceManifest m;
  m.files["/home/user/a.txt"] = "hi";
  m.files["/home/user/Documents/notes.md"] = "# notes\n";
  m.dirs.push_back("/home/user/Downloads");
  m.bookmarks.push_back({"Docs", "https://docs.python.org", "Bookmarks bar"});
  m.settings[{"editor", "theme"}] = "Light";
  m.start_url = "https://start.example.com";
  m.cells["A1"] = std::string("name");
  return m;
}

inline hcua::world::PrimitiveAction random_primitive(hcua::Rng& rng, const hcua::world::WorldState& s) {
  using namespace hcua::world;
  static constexpr std::array<std::string_view, 14> kKeys = {
      "alt+1", "alt+2", "alt+3", "alt+4", "alt+5", "enter", "escape", "backspace",
      "ctrl+k", "ctrl+t", "ctrl+o", "ctrl+shift+o", "delete", "ctrl+s"};
  static constexpr std::array<std::string_view, 5> kTexts = {"x", "Favorites", "/home/user/b.txt", "42", "dark"};
  const Screen screen = render(s);
  switch (rng.below(5)) {
    case 0:
    case 1: {
      const auto& e = screen.elements[rng.below(screen.elements.size())];
      auto [x, y] = e.bbox.center();
      return Click{x, y};
    }
    case 2: return KeyPress{std::string(kKeys[rng.below(kKeys.size())])};
    case 3: return TypeText{std::string(kTexts[rng.below(kTexts.size())])};
    default: return Scroll{static_cast<int>(rng.below(5)) - 2};
  }
}

inline std::vector<hcua::world::WorldState> random_states(std::uint64_t seed, std::size_t walks,
                                                          std::size_t depth) {
  hcua::Rng rng(seed);
  std::vector<hcua::world::WorldState> out;
  for (std::size_t w = 0; w < walks; ++w) {
    auto s = hcua::world::reset(seed + w, desk_manifest());
    out.push_back(s);
    for (std::size_t d = 0; d < depth; ++d) {
      s = hcua::world::apply_primitive(s, random_primitive(rng, s)).next_state;
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace testsupport
