#pragma once

// Task synthesis: evaluator-first composition, exploration-driven
// instruction-first proposals, workspace preparation and corpus statistics.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcua/core/rng.hpp"
#include "hcua/rollout/trajectory.hpp"
#include "hcua/tasksynth/fixtures.hpp"
#include "hcua/tasksynth/task.hpp"
#include "hcua/verify/evaluator.hpp"
#include "hcua/world/world.hpp"

namespace hcua::tasksynth {

// ---------------------------------------------------------------------------
// Instruction grammar

/// Renders a root all/any over 1-3 atomic leaves; nullopt for other shapes.
std::optional<std::string> phrase_config(const verify::EvaluatorConfig& cfg);

/// Inverse of the phrasings produced by this module (both strategies).
std::optional<verify::EvaluatorConfig> parse_instruction(std::string_view text);

/// The app an atomic check naturally belongs to.
world::App leaf_domain(const verify::AtomicEvaluator& a);

// ---------------------------------------------------------------------------
// Proposers

struct Proposal {
  std::string instruction;
  verify::EvaluatorConfig evaluator;
};

class Proposer {
 public:
  virtual ~Proposer() = default;
  /// Evaluator-first: instruction text for a composed config.
  virtual std::optional<std::string> describe(const verify::EvaluatorConfig& cfg, std::uint64_t seed) const = 0;
  /// Instruction-first: a task bound to entities visible in the state.
  virtual std::optional<Proposal> propose(const world::WorldState& state, std::uint64_t seed) const = 0;
};

enum class Template {
  new_folder,           // files
  new_spreadsheet,      // files
  copy_path,            // files
  bookmark_bar_folder,  // browser
  open_url,             // browser
  replace_contents,     // editor
  set_theme,            // editor
  set_cell,             // sheet
  change_setting,       // settings
};
inline constexpr std::array<Template, 9> kAllTemplates = {
    Template::new_folder,       Template::new_spreadsheet, Template::copy_path,
    Template::bookmark_bar_folder, Template::open_url,     Template::replace_contents,
    Template::set_theme,        Template::set_cell,        Template::change_setting};

/// Scripted reference proposer.
class TemplateProposer : public Proposer {
 public:
  TemplateProposer() : library_(kAllTemplates.begin(), kAllTemplates.end()) {}
  explicit TemplateProposer(std::vector<Template> library) : library_(std::move(library)) {}

  std::optional<std::string> describe(const verify::EvaluatorConfig& cfg, std::uint64_t seed) const override;
  std::optional<Proposal> propose(const world::WorldState& state, std::uint64_t seed) const override;

 private:
  std::vector<Template> library_;
};

// ---------------------------------------------------------------------------
// Generation

struct GenerationLog {
  std::vector<std::string> skipped;  // one line per skipped candidate
};

inline constexpr double kAllOfProbability = 0.7;

/// Throws GenerationError when n == 0 or the library is empty.
std::vector<Task> gen_evaluator_first(std::span<const verify::AtomicEvaluator> library, const Proposer& proposer,
                                      std::size_t n, std::uint64_t seed, GenerationLog* log = nullptr);

struct ExploredState {
  world::WorldState state;
  std::vector<world::PrimitiveAction> path;  // valid actions from the start state
};

class Walker {
 public:
  virtual ~Walker() = default;
  virtual world::PrimitiveAction choose(const world::WorldState& state, Rng& rng) const = 0;
};

/// Clicks rendered elements, presses bound keys and types short words.
class RandomWalker : public Walker {
 public:
  world::PrimitiveAction choose(const world::WorldState& state, Rng& rng) const override;
};

/// Structural hash that ignores the step counter.
std::uint64_t content_hash(const world::WorldState& state);

/// Seeded valid-action walks from reset(start); states deduplicated by
/// content_hash (the start state itself is excluded). Throws GenerationError
/// when depth or walks is zero.
std::vector<ExploredState> explore(std::uint64_t seed, const Walker& walker, std::size_t depth, std::size_t walks,
                                   const world::WorkspaceManifest& start = desk_fixture_manifest());

/// Throws GenerationError when states is empty.
std::vector<Task> gen_instruction_first(std::span<const ExploredState> states, const Proposer& proposer,
                                        std::uint64_t seed, GenerationLog* log = nullptr);

/// Resets the world from the task manifest; throws GenerationError when the
/// evaluator already holds.
world::WorldState prepare_workspace(const Task& task, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Corpus files and statistics

std::string corpus_to_jsonl(const std::vector<Task>& tasks);
/// Throws LoadError naming the line of the first bad record.
std::vector<Task> corpus_from_jsonl(const std::string& text);

struct StatsRow {
  Strategy strategy = Strategy::evaluator_first;
  std::size_t task_count = 0;
  double success_rate = 0.0;               // over trajectories
  std::optional<double> avg_success_steps;  // absent without successes
  std::size_t trajectory_count = 0;
};

struct StatsTable {
  std::vector<StatsRow> rows;  // one per strategy, in enum order
};

StatsTable corpus_stats(const std::vector<Task>& tasks,
                        const std::map<std::string, std::vector<rollout::Trajectory>>& trajectories);
std::string stats_text(const StatsTable& table);
nlohmann::json stats_json(const StatsTable& table);

}  // namespace hcua::tasksynth
