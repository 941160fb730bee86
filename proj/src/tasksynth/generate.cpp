#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "hcua/core/errors.hpp"
#include "hcua/core/hash.hpp"
#include "hcua/tasksynth/synth.hpp"

namespace hcua::tasksynth {

namespace {

using verify::AtomicEvaluator;
using verify::AtomicKind;
using world::WorkspaceManifest;
using Params = std::map<std::string, Scalar>;

std::string trimmed(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  return items[rng.below(items.size())];
}

std::string padded(std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", n);
  return buf;
}

std::vector<std::string> seeded_files(const WorkspaceManifest& m, std::string_view under) {
  std::vector<std::string> out;
  const std::string prefix = std::string(world::kHomeDir) + "/" + std::string(under);
  for (const auto& [path, content] : m.files) {
    if (path.rfind(prefix, 0) == 0) out.push_back(path);
  }
  return out;
}

// Samples parameters for one leaf and adjusts the manifest so the leaf starts
// false and stays reachable through the GUI.
std::optional<Params> sample_params(AtomicKind kind, WorkspaceManifest& m, Rng& rng, bool pdf) {
  const FixtureCorpus& c = fixture_corpus();
  const std::string home(world::kHomeDir);
  switch (kind) {
    case AtomicKind::file_exists: {
      static const std::vector<std::string> kExt = {"", ".txt", ".md", ".pdf", ".csv"};
      for (int attempt = 0; attempt < 16; ++attempt) {
        const std::string dir = pdf ? home + "/Documents" : pick(m.dirs, rng);
        const std::string path = dir + "/" + pick(c.new_names, rng) + (pdf ? ".pdf" : pick(kExt, rng));
        if (m.files.count(path) == 0 && std::find(m.dirs.begin(), m.dirs.end(), path) == m.dirs.end()) {
          return Params{{"path", path}};
        }
      }
      return std::nullopt;
    }
    case AtomicKind::file_content_equals: {
      std::vector<std::string> files = seeded_files(m, "Documents/");
      for (const auto& p : seeded_files(m, "projects/")) files.push_back(p);
      if (files.empty()) return std::nullopt;
      const std::string path = pick(files, rng);
      for (int attempt = 0; attempt < 16; ++attempt) {
        const std::string& text = pick(c.sentences, rng);
        if (text != trimmed(m.files.at(path))) return Params{{"path", path}, {"content", text}};
      }
      return std::nullopt;
    }
    case AtomicKind::url_equals: {
      std::string url = pick(c.urls, rng);
      if (url == m.start_url) return std::nullopt;
      return Params{{"url", url}};
    }
    case AtomicKind::setting_equals: {
      const std::size_t variant = rng.below(4);
      if (variant == 0) {
        std::string theme = pick(c.themes, rng);
        if (m.settings[{"editor", "theme"}] == theme) return std::nullopt;
        return Params{{"app", "editor"}, {"key", "theme"}, {"value", theme}};
      }
      if (variant == 1) {
        const auto& [combo, command] = pick(c.keybindings, rng);
        if (m.settings.count({"keybindings", combo}) != 0) return std::nullopt;
        return Params{{"app", "keybindings"}, {"key", combo}, {"value", command}};
      }
      static const std::vector<world::SettingKey> kKeys = {
          {"writer", "default_font"}, {"system", "timezone"}, {"desktop", "dark_mode"}, {"editor", "font_size"}};
      const auto& key = pick(kKeys, rng);
      std::string value;
      if (key.second == "default_font") value = pick(c.fonts, rng);
      else if (key.second == "timezone") value = pick(c.timezones, rng);
      else if (key.second == "dark_mode") value = "true";
      else value = rng.chance(0.5) ? "12" : "18";
      auto it = m.settings.find(key);
      if (it == m.settings.end()) return std::nullopt;
      if (it->second == value) return std::nullopt;
      return Params{{"app", key.first}, {"key", key.second}, {"value", value}};
    }
    case AtomicKind::cell_value_equals: {
      if (!m.sheet_path) seed_table(m, pick(c.tables, rng));
      const std::string ref = std::string(1, static_cast<char>('A' + rng.below(6))) + std::to_string(1 + rng.below(12));
      const Scalar& value = pick(c.cell_values, rng);
      auto it = m.cells.find(ref);
      if (it != m.cells.end() && scalar_text(it->second) == scalar_text(value)) return std::nullopt;
      return Params{{"cell", ref}, {"value", value}};
    }
    case AtomicKind::clipboard_equals: {
      const auto docs = seeded_files(m, "Documents/");
      if (docs.empty()) return std::nullopt;
      const std::string path = pick(docs, rng);
      if (m.clipboard == path) return std::nullopt;
      return Params{{"text", path}};
    }
    case AtomicKind::bookmark_exists: {
      const bool bar = rng.chance(0.5);
      const std::string name = bar ? pick(c.bookmark_bar_folders, rng) : pick(c.bookmark_names, rng);
      const std::string folder = bar ? std::string(world::kDefaultBookmarkFolder) : pick(c.bookmark_folders, rng);
      for (const auto& b : m.bookmarks) {
        if (b.name == name && b.folder == folder) return std::nullopt;
      }
      return Params{{"name", name}, {"folder", folder}};
    }
  }
  return std::nullopt;
}

void note(GenerationLog* log, std::string line) {
  if (log != nullptr) log->skipped.push_back(std::move(line));
}

}  // namespace

std::vector<Task> gen_evaluator_first(std::span<const AtomicEvaluator> library, const Proposer& proposer, std::size_t n,
                                      std::uint64_t seed, GenerationLog* log) {
  if (n == 0) throw GenerationError("gen_evaluator_first: n must be at least 1");
  if (library.empty()) throw GenerationError("gen_evaluator_first: empty atomic library");
  // One exemplar per kind; later duplicates of a kind are ignored.
  std::vector<const AtomicEvaluator*> exemplars;
  for (const auto& a : library) {
    if (std::none_of(exemplars.begin(), exemplars.end(), [&](const auto* e) { return e->kind == a.kind; })) {
      exemplars.push_back(&a);
    }
  }

  std::vector<Task> out;
  const std::size_t max_attempts = 20 * n;
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < n; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(3, exemplars.size()));
    std::vector<const AtomicEvaluator*> chosen = exemplars;
    for (std::size_t i = chosen.size(); i > 1; --i) std::swap(chosen[i - 1], chosen[rng.below(i)]);
    chosen.resize(k);

    // The navigate-and-download pair: URL first, a PDF in Documents second.
    bool pdf = false;
    if (k == 2 && ((chosen[0]->kind == AtomicKind::file_exists && chosen[1]->kind == AtomicKind::url_equals) ||
                   (chosen[0]->kind == AtomicKind::url_equals && chosen[1]->kind == AtomicKind::file_exists))) {
      if (chosen[0]->kind == AtomicKind::file_exists) std::swap(chosen[0], chosen[1]);
      pdf = rng.chance(0.5);
    }

    Task task;
    task.strategy = Strategy::evaluator_first;
    task.id = "ef-" + std::to_string(seed) + "-" + padded(out.size());
    // Workspace content follows the first exemplar; the task domain follows its sampled leaf.
    std::vector<AtomicEvaluator> atoms;
    WorkspaceManifest m;
    bool ok = true;
    for (std::size_t i = 0; i < chosen.size() && ok; ++i) {
      if (i == 0) m = simulate_workspace(leaf_domain(*chosen[0]), rng);
      auto params = sample_params(chosen[i]->kind, m, rng, pdf);
      if (!params) {
        ok = false;
        break;
      }
      atoms.push_back(verify::reprogram(*chosen[i], *params));
    }
    if (!ok) {
      note(log, "attempt " + std::to_string(attempt) + ": parameter sampling collided with the workspace");
      continue;
    }
    const bool all = k == 1 || pdf || rng.chance(kAllOfProbability);
    task.evaluator = verify::compose(atoms, all ? verify::Combinator::all : verify::Combinator::any);
    task.domain = leaf_domain(atoms.front());
    task.manifest = std::move(m);
    auto text = proposer.describe(task.evaluator, derive_seed(seed, "propose") ^ attempt);
    if (!text || text->empty()) {
      note(log, "attempt " + std::to_string(attempt) + ": proposer declined " +
                    verify::config_to_json(task.evaluator).dump());
      continue;
    }
    task.instruction = std::move(*text);
    try {
      prepare_workspace(task);
    } catch (const GenerationError& e) {
      note(log, "attempt " + std::to_string(attempt) + ": " + e.what());
      continue;
    }
    out.push_back(std::move(task));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

world::PrimitiveAction RandomWalker::choose(const world::WorldState& state, Rng& rng) const {
  static const std::vector<std::string> kKeys = {
      "escape", "enter",  "alt+1", "alt+2",  "alt+3",        "alt+4",  "alt+5",     "ctrl+l",
      "ctrl+o", "alt+up", "alt+left", "ctrl+s", "ctrl+shift+o", "backspace", "ctrl+a", "alt+home"};
  static const std::vector<std::string> kWords = {"notes", "alpha", "42", "Budget", "docs", "draft"};
  const double r = rng.uniform();
  if (r < 0.65) {
    const world::Screen screen = world::render(state);
    std::vector<const world::ScreenElement*> enabled;
    for (const auto& e : screen.elements) {
      if (!e.state_flags.disabled) enabled.push_back(&e);
    }
    // Delete buttons are skipped so walks rarely erase the seeded content.
    const auto* e = enabled[rng.below(enabled.size())];
    if (e->id == "files.delete") return world::KeyPress{"escape"};
    auto [x, y] = e->bbox.center();
    if (rng.chance(0.1)) return world::DoubleClick{x, y};
    return world::Click{x, y};
  }
  if (r < 0.85) return world::KeyPress{pick(kKeys, rng)};
  if (r < 0.95) return world::TypeText{pick(kWords, rng)};
  return world::Scroll{rng.chance(0.5) ? 3 : -3};
}

std::uint64_t content_hash(const world::WorldState& state) {
  world::WorldState copy = state;
  copy.step_counter = 0;
  return world::state_hash(copy);
}

std::vector<ExploredState> explore(std::uint64_t seed, const Walker& walker, std::size_t depth, std::size_t walks,
                                   const WorkspaceManifest& start) {
  if (depth == 0 || walks == 0) throw GenerationError("explore: depth and walks must be at least 1");
  const world::WorldState origin = world::reset(seed, start);
  std::set<std::uint64_t> seen = {content_hash(origin)};
  std::vector<ExploredState> out;
  constexpr int kAttemptsPerStep = 20;
  for (std::size_t w = 0; w < walks; ++w) {
    Rng rng(derive_seed(seed, w));
    world::WorldState s = origin;
    std::vector<world::PrimitiveAction> path;
    for (std::size_t d = 0; d < depth; ++d) {
      bool moved = false;
      for (int attempt = 0; attempt < kAttemptsPerStep && !moved; ++attempt) {
        const world::PrimitiveAction a = walker.choose(s, rng);
        world::StepOutcome o = world::apply_primitive(s, a);
        if (o.invalid) continue;
        moved = true;
        s = std::move(o.next_state);
        path.push_back(a);
        if (seen.insert(content_hash(s)).second) out.push_back(ExploredState{s, path});
      }
      if (!moved) break;
    }
  }
  return out;
}

std::vector<Task> gen_instruction_first(std::span<const ExploredState> states, const Proposer& proposer,
                                        std::uint64_t seed, GenerationLog* log) {
  if (states.empty()) throw GenerationError("gen_instruction_first: no states");
  std::vector<Task> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const world::WorldState& s = states[i].state;
    auto proposal = proposer.propose(s, derive_seed(seed, i));
    if (!proposal) {
      note(log, "state " + std::to_string(i) + ": no applicable template");
      continue;
    }
    Task task;
    task.id = "if-" + std::to_string(seed) + "-" + padded(out.size());
    task.instruction = std::move(proposal->instruction);
    task.domain = s.focus.app;
    task.manifest = world::manifest_from_state(s);
    task.evaluator = std::move(proposal->evaluator);
    task.strategy = Strategy::instruction_first;
    try {
      prepare_workspace(task);
    } catch (const GenerationError& e) {
      note(log, "state " + std::to_string(i) + ": " + e.what());
      continue;
    }
    out.push_back(std::move(task));
  }
  return out;
}

world::WorldState prepare_workspace(const Task& task, std::uint64_t seed) {
  world::WorldState s = world::reset(seed, task.manifest);
  if (verify::evaluate(s, task.evaluator)) {
    throw GenerationError("task " + task.id + ": evaluator already satisfied after seeding");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Corpus files and statistics

std::string corpus_to_jsonl(const std::vector<Task>& tasks) {
  std::string out;
  for (const auto& t : tasks) out += task_to_json(t).dump() + "\n";
  return out;
}

std::vector<Task> corpus_from_jsonl(const std::string& text) {
  std::vector<Task> out;
  std::set<std::string> ids;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      out.push_back(task_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(number, std::string("corrupt task record: ") + e.what());
    } catch (const GenerationError& e) {
      throw LoadError(number, e.what());
    }
    if (!ids.insert(out.back().id).second) throw LoadError(number, "duplicate task id " + out.back().id);
  }
  return out;
}

StatsTable corpus_stats(const std::vector<Task>& tasks,
                        const std::map<std::string, std::vector<rollout::Trajectory>>& trajectories) {
  StatsTable table;
  for (Strategy strategy : {Strategy::evaluator_first, Strategy::instruction_first}) {
    StatsRow row;
    row.strategy = strategy;
    std::size_t successes = 0;
    double success_steps = 0.0;
    for (const auto& t : tasks) {
      if (t.strategy != strategy) continue;
      ++row.task_count;
      auto it = trajectories.find(t.id);
      if (it == trajectories.end()) continue;
      for (const auto& traj : it->second) {
        ++row.trajectory_count;
        if (traj.success) {
          ++successes;
          success_steps += static_cast<double>(traj.length);
        }
      }
    }
    if (row.trajectory_count > 0) row.success_rate = static_cast<double>(successes) / row.trajectory_count;
    if (successes > 0) row.avg_success_steps = success_steps / successes;
    table.rows.push_back(row);
  }
  return table;
}

std::string stats_text(const StatsTable& table) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-18s %8s %13s %10s %13s\n", "strategy", "tasks", "success_rate", "avg_steps",
                "trajectories");
  out += buf;
  for (const auto& r : table.rows) {
    char steps[32] = "-";
    if (r.avg_success_steps) std::snprintf(steps, sizeof steps, "%.2f", *r.avg_success_steps);
    std::snprintf(buf, sizeof buf, "%-18s %8zu %13.3f %10s %13zu\n", std::string(strategy_name(r.strategy)).c_str(),
                  r.task_count, r.success_rate, steps, r.trajectory_count);
    out += buf;
  }
  return out;
}

nlohmann::json stats_json(const StatsTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"strategy", strategy_name(r.strategy)},
                    {"task_count", r.task_count},
                    {"success_rate", r.success_rate},
                    {"avg_success_steps", r.avg_success_steps ? nlohmann::json(*r.avg_success_steps) : nlohmann::json()},
                    {"trajectory_count", r.trajectory_count}});
  }
  return {{"rows", rows}};
}

}  // namespace hcua::tasksynth
