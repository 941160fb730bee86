#include "hcua/tasksynth/fixtures.hpp"

namespace hcua::tasksynth {

namespace {

using S = std::string;

Scalar s(const char* v) { return S(v); }
Scalar i(std::int64_t v) { return v; }
Scalar d(double v) { return v; }

FixtureCorpus build() {
  FixtureCorpus c;
  c.version = "desk-fixtures/1";
  c.code = {
      {"projects/tokenizer/tokenize.py",
       "import re\n\nWORD = re.compile(r\"\\w+\")\n\n\ndef tokenize(text):\n    return WORD.findall(text.lower())\n"},
      {"projects/tokenizer/test_tokenize.py",
       "from tokenize import tokenize\n\n\ndef test_split():\n    assert tokenize(\"A b\") == [\"a\", \"b\"]\n"},
      {"projects/loader/load.py",
       "import json\n\n\ndef load(path):\n    with open(path) as f:\n        return json.load(f)\n"},
      {"projects/stats/mean.cpp",
       "#include <vector>\n\ndouble mean(const std::vector<double>& xs) {\n  double s = 0;\n  for (double x : xs) s += x;\n"
       "  return xs.empty() ? 0 : s / xs.size();\n}\n"},
      {"projects/web/app.js", "const express = require(\"express\");\nconst app = express();\napp.get(\"/\", (req, res) => res.send(\"ok\"));\n"},
      {"projects/cli/main.rs", "fn main() {\n    let args: Vec<String> = std::env::args().collect();\n    println!(\"{}\", args.len());\n}\n"},
  };
  c.documents = {
      {"Documents/notes.md", "# Meeting notes\n\n- ship the parser\n- review the budget\n"},
      {"Documents/report.txt", "Quarterly report\n\nRevenue grew in every region except the north.\n"},
      {"Documents/letter.txt", "Dear Sam,\n\nThanks for the quick turnaround on the draft.\n"},
      {"Documents/recipe.md", "# Lentil soup\n\n1. Rinse lentils\n2. Simmer for 25 minutes\n"},
      {"Documents/todo.txt", "buy stamps\nbook the venue\ncall the plumber\n"},
      {"Documents/travel.md", "# Trip\n\nTrain leaves at 08:15 from platform 4.\n"},
  };
  c.tables = {
      {"budget", {{s("item"), s("cost"), s("qty")}, {s("paper"), d(4.5), i(10)}, {s("ink"), d(19.99), i(2)},
                  {s("stapler"), i(12), i(1)}}},
      {"grades", {{s("student"), s("score")}, {s("Ana"), i(91)}, {s("Ben"), i(78)}, {s("Chen"), i(85)}}},
      {"inventory", {{s("sku"), s("name"), s("stock")}, {s("X-1"), s("bolt"), i(240)}, {s("X-2"), s("nut"), i(310)}}},
      {"sales", {{s("month"), s("units")}, {s("Jan"), i(120)}, {s("Feb"), i(98)}, {s("Mar"), i(143)}}},
  };
  c.sentences = {
      "Draft approved.",
      "All tests pass on the main branch.",
      "Lunch moved to 13:00",
      "print(\"hello\")",
      "TODO: update the changelog",
      "Status: ready for review",
      "x = 42",
      "Call the bank on Monday.",
  };
  c.urls = {
      "https://docs.python.org/3/tutorial",
      "https://en.wikipedia.org/wiki/Spreadsheet",
      "https://github.com/trending",
      "https://news.ycombinator.com",
      "https://www.openstreetmap.org",
      "https://arxiv.org/list/cs.LG/recent",
      "https://developer.mozilla.org/en-US/docs/Web",
      "https://cppreference.com/w/cpp/container",
  };
  c.new_names = {"Archive", "Invoices", "Photos 2024", "drafts", "backup", "Receipts", "scratch", "Taxes",
                 "plans", "Music"};
  c.themes = {"Dark+", "Monokai", "Solarized Light", "High Contrast", "Quiet Light"};
  c.fonts = {"DejaVu Sans", "Noto Serif", "Inter", "Source Sans 3"};
  c.timezones = {"Europe/Berlin", "America/New_York", "Asia/Tokyo", "Australia/Sydney"};
  c.keybindings = {{"ctrl+j", "workbench.action.togglePanel"},
                   {"ctrl+shift+d", "editor.action.duplicateSelection"},
                   {"alt+z", "editor.action.toggleWordWrap"},
                   {"ctrl+alt+n", "workbench.action.files.newUntitledFile"}};
  c.bookmark_bar_folders = {"Favorites", "Work", "Recipes", "Reading list"};
  c.bookmark_names = {"Python tutorial", "Trending repos", "Maps", "Web docs"};
  c.bookmark_folders = {"Research", "Later", "Dev"};
  c.cell_values = {s("done"), s("pending"), i(42), i(-7), i(1000), d(3.5), d(0.25), s("north")};
  return c;
}

}  // namespace

void seed_table(world::WorkspaceManifest& m, const FixtureTable& t) {
  m.sheet_path = std::string(world::kHomeDir) + "/Documents/" + t.name + ".csv";
  m.cells.clear();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t col = 0; col < t.rows[r].size(); ++col) {
      m.cells[std::string(1, static_cast<char>('A' + col)) + std::to_string(r + 1)] = t.rows[r][col];
    }
  }
}

const FixtureCorpus& fixture_corpus() {
  static const FixtureCorpus corpus = build();
  return corpus;
}

world::WorkspaceManifest simulate_workspace(world::App domain, Rng& rng) {
  const FixtureCorpus& c = fixture_corpus();
  const std::string home(world::kHomeDir);
  world::WorkspaceManifest m;
  m.dirs = {home + "/Documents", home + "/Downloads", home + "/Pictures", home + "/projects"};

  // Three documents and two code files, at distinct positions in the pools.
  const std::size_t doc0 = rng.below(c.documents.size());
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& f = c.documents[(doc0 + k * 2) % c.documents.size()];
    m.files[home + "/" + f.path] = f.content;
  }
  const std::size_t code0 = rng.below(c.code.size());
  const std::size_t code_files = domain == world::App::editor ? 3 : 2;
  for (std::size_t k = 0; k < code_files; ++k) {
    const auto& f = c.code[(code0 + k) % c.code.size()];
    m.files[home + "/" + f.path] = f.content;
  }
  m.files[home + "/Pictures/wallpaper.png"] = "PNG";

  m.settings[{"editor", "theme"}] = "Light";
  m.settings[{"editor", "font_size"}] = "14";
  m.settings[{"writer", "default_font"}] = "Liberation Serif";
  m.settings[{"desktop", "dark_mode"}] = "false";
  m.settings[{"desktop", "wallpaper"}] = "/usr/share/backgrounds/default.png";
  m.settings[{"system", "timezone"}] = "UTC";

  m.start_url = "https://start.local/home";
  const std::size_t url0 = rng.below(c.urls.size());
  for (std::size_t k = 0; k < 2; ++k) {
    const std::string& url = c.urls[(url0 + k) % c.urls.size()];
    m.bookmarks.push_back(world::Bookmark{"Saved " + std::to_string(k + 1), url, std::string(world::kDefaultBookmarkFolder)});
  }

  if (domain == world::App::sheet || rng.chance(0.3)) {
    seed_table(m, c.tables[rng.below(c.tables.size())]);
  }
  return m;
}

world::WorkspaceManifest desk_fixture_manifest() {
  Rng rng(0);
  world::WorkspaceManifest m = simulate_workspace(world::App::files, rng);
  if (!m.sheet_path) seed_table(m, fixture_corpus().tables.front());
  return m;
}

}  // namespace hcua::tasksynth
