#pragma once

// Versioned local content used to seed workspaces.

#include <string>
#include <vector>

#include "hcua/core/rng.hpp"
#include "hcua/core/scalar.hpp"
#include "hcua/world/world.hpp"

namespace hcua::tasksynth {

struct FixtureFile {
  std::string path;  // relative to the home folder
  std::string content;
};

struct FixtureTable {
  std::string name;
  std::vector<std::vector<Scalar>> rows;  // first row is the header
};

struct FixtureCorpus {
  std::string version;
  std::vector<FixtureFile> code;
  std::vector<FixtureFile> documents;
  std::vector<FixtureTable> tables;
  std::vector<std::string> sentences;  // replacement file contents
  std::vector<std::string> urls;
  std::vector<std::string> new_names;  // folder and file stems not present in any workspace
  std::vector<std::string> themes;
  std::vector<std::string> fonts;
  std::vector<std::string> timezones;
  std::vector<std::pair<std::string, std::string>> keybindings;  // combo, command
  std::vector<std::string> bookmark_bar_folders;
  std::vector<std::string> bookmark_names;
  std::vector<std::string> bookmark_folders;
  std::vector<Scalar> cell_values;
};

const FixtureCorpus& fixture_corpus();

/// Opens the table as the workspace spreadsheet, header in row 1.
void seed_table(world::WorkspaceManifest& m, const FixtureTable& t);

/// Base desk content for a task domain: documents, code, bookmarks, settings
/// and (for sheet tasks, or at random otherwise) an open spreadsheet.
world::WorkspaceManifest simulate_workspace(world::App domain, Rng& rng);

/// The fixed starting manifest for exploratory walks.
world::WorkspaceManifest desk_fixture_manifest();

}  // namespace hcua::tasksynth
