// Runs the ten acceptance criteria and prints one PASS/FAIL line per
// criterion. Every threshold and time budget is a constant in this file.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "hcua/cli/commands.hpp"
#include "hcua/core/errors.hpp"
#include "hcua/core/rng.hpp"
#include "hcua/learn/sft.hpp"
#include "hcua/learn/train.hpp"
#include "hcua/rollout/planners.hpp"
#include "hcua/tasksynth/synth.hpp"
#include "support/formulas.hpp"

#ifndef HCUA_CLI_BINARY
#error "HCUA_CLI_BINARY must name the built CLI"
#endif

using namespace hcua;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Tolerances and thresholds.
constexpr double kAdvantageStdTol = 1e-9;
constexpr double kAdvantageMeanTol = 1e-12;
constexpr double kGradRelTol = 1e-6;
constexpr double kFdStep = 1e-5;
constexpr double kKinkMargin = 1e-3;  // finite differences skip ratios this close to a clip edge
constexpr std::size_t kGradInstances = 100;
constexpr std::size_t kConservationTrajectories = 1000;
constexpr std::size_t kCorpusEvaluatorFirst = 500;
constexpr double kOracleSolvedMin = 0.80;
constexpr std::size_t kOracleStepBudget = 15;
constexpr double kSrGainMin = 0.10;
constexpr std::size_t kRlSteps = 150;

// Time budgets in seconds.
constexpr double kBudget1 = 1, kBudget2 = 5, kBudget3 = 1, kBudget4 = 30, kBudget5 = 10;
constexpr double kBudget6 = 300, kBudget7 = 300, kBudget8 = 5, kBudget9 = 900, kBudget10 = 600;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    const fs::path p = fs::temp_directory_path() / "hcua_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string& output(const cli::Outputs& out, const std::string& name) {
  for (const auto& f : out) {
    if (f.name == name) return f.content;
  }
  throw std::runtime_error("missing output " + name);
}

rollout::Trajectory bare_trajectory(bool success, bool tools, std::size_t length) {
  rollout::Trajectory t;
  t.task_id = "t";
  t.success = success;
  t.used_tool_call = tools;
  t.length = length;
  t.steps.resize(length);
  return t;
}

double population_std(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

// The default synth corpus at seed 0, shared by criteria 6, 7 and 9.
struct SharedCorpus {
  cli::Outputs synth;
  std::string path;
  std::vector<tasksynth::Task> tasks;
};

const SharedCorpus& shared_corpus() {
  static const SharedCorpus corpus = [] {
    SharedCorpus c;
    cli::RunConfig cfg;
    cfg.command = "synth";
    cfg.seed = 0;
    c.synth = cli::run_command(cfg);
    c.path = (scratch_dir() / "corpus.jsonl").string();
    std::ofstream(c.path, std::ios::binary) << output(c.synth, "corpus.jsonl");
    c.tasks = tasksynth::corpus_from_jsonl(output(c.synth, "corpus.jsonl"));
    return c;
  }();
  return corpus;
}

// ---------------------------------------------------------------------------

Outcome reward_table() {
  Outcome o;
  struct Row {
    bool success, tools;
    double env, tool, total;
  };
  const Row rows[] = {{true, true, 1.0, 0.3, 1.3}, {true, false, 1.0, 0.0, 1.0},
                      {false, true, -1.0, 0.0, -1.0}, {false, false, -1.0, 0.0, -1.0}};
  for (const auto& r : rows) {
    for (std::size_t len : {1, 2, 15, 50}) {
      const auto rec = learn::reward(bare_trajectory(r.success, r.tools, len));
      o.require(rec == learn::RewardRecord{r.env, r.tool, r.total},
                "success=" + std::to_string(r.success) + " tools=" + std::to_string(r.tools));
    }
  }
  o.note("4 combinations x 4 lengths, totals {1.3, 1.0, -1.0}");
  return o;
}

Outcome conservation() {
  Outcome o;
  Rng rng(2024);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < kConservationTrajectories; ++i) {
    const auto t = bare_trajectory(rng.chance(0.5), rng.chance(0.5), 1 + rng.below(300));
    const auto rec = learn::reward(t);
    const auto steps = learn::propagate(rec, t);
    if (steps.size() != t.length || learn::compensated_sum(steps) != rec.total) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " trajectories do not sum to their total");
  o.note(std::to_string(kConservationTrajectories) + " trajectories, exact equality");
  return o;
}

Outcome difficulty_band() {
  Outcome o;
  const auto library = verify::atomic_library();
  tasksynth::TemplateProposer proposer;
  const auto tasks = tasksynth::gen_evaluator_first(library, proposer, 40, 31);
  const auto registry = toolforge::builtin_registry();
  rollout::ReferenceGrounder grounder;
  rollout::EpisodeConfig cfg;
  rollout::NoisyPlanner planner(std::make_unique<rollout::InstructionPlanner>(), 0.3);
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto rec = learn::difficulty(tasks[i], planner, grounder, registry, cfg, 8, 100 + i);
    const auto trajs = rollout::run_batch(tasks[i], planner, grounder, registry, cfg, 8, 100 + i);
    std::size_t wins = 0;
    for (const auto& t : trajs) wins += t.success ? 1 : 0;
    o.require(rec.k == 8 && rec.successes == wins && rec.score == static_cast<double>(wins) / 8.0, tasks[i].id);
    seen.insert(wins);
  }
  o.note("K=8 on 40 tasks, " + std::to_string(seen.size()) + " distinct success counts");

  // Every K=8 score, against an integer oracle for the closed band [0.4, 0.8].
  std::vector<learn::DifficultyRecord> records;
  std::vector<std::string> expected;
  for (std::size_t j = 0; j <= 8; ++j) {
    const std::string id = "s" + std::to_string(j);
    records.push_back({id, 8, j, static_cast<double>(j) / 8.0});
    if (j * 10 >= 4 * 8 && j * 10 <= 8 * 8) expected.push_back(id);
  }
  const std::vector<std::pair<std::string, double>> edges = {
      {"lo", 0.4}, {"hi", 0.8}, {"below", std::nextafter(0.4, 0.0)}, {"above", std::nextafter(0.8, 1.0)}};
  for (const auto& [id, score] : edges) records.push_back({id, 10, 0, score});
  expected.push_back("hi");
  expected.push_back("lo");
  std::sort(expected.begin(), expected.end());
  auto kept = learn::filter_band(records, 0.4, 0.8);
  std::sort(kept.begin(), kept.end());
  o.require(kept == expected, "band membership");
  o.note("0.4 and 0.8 kept, neighbours dropped");
  return o;
}

Outcome grpo_math() {
  Outcome o;
  Rng rng(4);
  const double values[] = {1.3, 1.0, -1.0};
  double worst_std = 0.0, worst_mean = 0.0;
  std::size_t groups = 0;
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> totals(2 + rng.below(15));
    for (double& v : totals) v = values[rng.below(3)];
    if (population_std(totals) == 0.0) continue;
    const auto a = learn::group_advantages(totals);
    worst_mean = std::max(worst_mean, std::abs(std::accumulate(a.begin(), a.end(), 0.0) / a.size()));
    worst_std = std::max(worst_std, std::abs(population_std(a) - 1.0));
    ++groups;
  }
  o.require(worst_std <= kAdvantageStdTol, "advantage std " + fmt("%.3g", worst_std));
  o.require(worst_mean <= kAdvantageMeanTol, "advantage mean " + fmt("%.3g", worst_mean));
  o.note(std::to_string(groups) + " groups, max |std-1| " + fmt("%.2g", worst_std));

  using namespace learn;
  const ClipConfig clip;
  std::size_t instances = 0;
  double worst_rel = 0.0;
  while (instances < kGradInstances) {
    PolicyParams policy;
    const std::size_t keys = 1 + rng.below(3);
    for (std::size_t k = 0; k < keys; ++k) {
      Logits z;
      for (double& v : z) v = rng.uniform() * 4.0 - 2.0;
      policy.table["k" + std::to_string(k)] = z;
    }
    policy.temperature = 0.5 + rng.uniform();
    std::vector<Group> gs(1 + rng.below(3));
    bool near_kink = false;
    for (auto& g : gs) {
      g.resize(2 + rng.below(3));
      for (auto& t : g) {
        t.advantage = rng.uniform() * 2.0 - 1.0;
        t.length = 1 + rng.below(5);
        for (std::size_t d = 0; d < t.length; ++d) {
          const std::string key = "k" + std::to_string(rng.below(keys));
          const std::size_t choice = rng.below(kTemplateCount);
          const double rho = 0.6 + 0.8 * rng.uniform();
          near_kink = near_kink || std::abs(rho - (1 - clip.eps_low)) < kKinkMargin ||
                      std::abs(rho - (1 + clip.eps_high)) < kKinkMargin;
          t.decisions.push_back(StepDecision{key, choice, policy.probs(key)[choice] / rho});
        }
      }
    }
    if (near_kink) continue;
    ++instances;
    for (const auto weighting : {StepWeighting::per_step, StepWeighting::loss_mean}) {
      const auto grad = surrogate_gradient(policy, gs, clip, weighting);
      double max_err = 0.0, max_fd = 0.0;
      for (auto& [key, z] : policy.table) {
        for (std::size_t j = 0; j < kTemplateCount; ++j) {
          const double keep = z[j];
          z[j] = keep + kFdStep;
          const double up = surrogate(policy, gs, clip, weighting);
          z[j] = keep - kFdStep;
          const double down = surrogate(policy, gs, clip, weighting);
          z[j] = keep;
          const double fd = (up - down) / (2 * kFdStep);
          const auto it = grad.find(key);
          max_err = std::max(max_err, std::abs((it == grad.end() ? 0.0 : it->second[j]) - fd));
          max_fd = std::max(max_fd, std::abs(fd));
        }
      }
      const double rel = max_err / std::max(max_fd, 1e-12);
      worst_rel = std::max(worst_rel, rel);
    }
  }
  o.require(worst_rel <= kGradRelTol, "gradient relative error " + fmt("%.3g", worst_rel));
  o.note(std::to_string(kGradInstances) + " gradient instances, max rel err " + fmt("%.2g", worst_rel));

  // A ratio up to 1 + eps_high still carries gradient; past it, none.
  PolicyParams one;
  one.table["k"] = {0.3, -0.2, 0.1, -1.0};
  const double p = one.probs("k")[0];
  auto grad_at = [&](double rho, double adv) {
    Group g = {SampledTrajectory{{StepDecision{"k", 0, p / rho}}, 1, adv}, SampledTrajectory{{}, 1, -adv}};
    const auto grad = surrogate_gradient(one, {g}, clip);
    return grad.count("k") ? grad.at("k")[0] : 0.0;
  };
  o.require(grad_at(1.0 + clip.eps_high, 1.0) > 0.0, "ratio at 1+eps_high moves");
  o.require(grad_at(1.0 + clip.eps_high + 1e-6, 1.0) == 0.0, "ratio past 1+eps_high clipped");
  o.require(grad_at(1.0 + 0.5 * (clip.eps_low + clip.eps_high), 1.0) > 0.0, "upper clip wider than lower");
  o.require(grad_at(1.0 - clip.eps_low, -1.0) < 0.0, "ratio at 1-eps_low moves");
  o.require(grad_at(1.0 - clip.eps_low - 1e-6, -1.0) == 0.0, "ratio past 1-eps_low clipped");
  o.note("clip-higher edges at " + fmt("%g", 1 - clip.eps_low) + " and " + fmt("%g", 1 + clip.eps_high));
  return o;
}

Outcome evaluator_semantics() {
  Outcome o;
  const auto cases = testsupport::enumerate_formulas(3, verify::kMaxDepth);
  std::size_t mismatches = 0;
  for (unsigned bits = 0; bits < 8; ++bits) {
    const auto s = testsupport::truth_state(bits);
    for (const auto& c : cases) {
      if (verify::evaluate(s, c.config) != testsupport::eval_formula(c.formula, bits)) ++mismatches;
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " formula mismatches");
  o.note(std::to_string(cases.size()) + " trees x 8 assignments");

  Rng rng(12);
  const auto library = verify::atomic_library();
  const std::array<Scalar, 5> any_values = {Scalar{std::int64_t{-4}}, Scalar{0.1}, Scalar{1e-300}, Scalar{true},
                                            Scalar{std::string("q\"\\")}};
  std::size_t broken = 0;
  const std::size_t rounds = 1000;
  for (std::size_t i = 0; i < rounds; ++i) {
    std::vector<verify::EvaluatorConfig> groups;
    for (std::size_t g = 0, n = 1 + rng.below(3); g < n; ++g) {
      std::vector<verify::AtomicEvaluator> atoms;
      for (std::size_t k = 0, m = 1 + rng.below(3); k < m; ++k) {
        const auto& base = library[rng.below(library.size())];
        std::map<std::string, Scalar> subs;
        for (const auto& p : verify::required_params(base.kind)) {
          if (!rng.chance(0.5)) continue;
          if (p.name == "path") subs[p.name] = "/home/user/f" + std::to_string(rng.below(100));
          else if (p.name == "cell") subs[p.name] = "B" + std::to_string(1 + rng.below(50));
          else if (!p.type) subs[p.name] = any_values[rng.below(any_values.size())];
          else subs[p.name] = "v" + std::to_string(rng.next() % 1000);
        }
        atoms.push_back(verify::reprogram(base, subs));
      }
      groups.push_back(verify::compose(atoms, rng.chance(0.5) ? verify::Combinator::all : verify::Combinator::any));
    }
    const auto cfg = rng.chance(0.5) ? verify::EvaluatorConfig::all_of(groups) : verify::EvaluatorConfig::any_of(groups);
    const std::string text = verify::config_to_json(cfg).dump();
    const auto back = verify::config_from_json(json::parse(text));
    if (!(back == cfg) || verify::config_to_json(back).dump() != text) ++broken;
  }
  o.require(broken == 0, std::to_string(broken) + " closure roundtrips differ");
  o.note(std::to_string(rounds) + " reprogram/compose roundtrips");
  return o;
}

Outcome synthesis() {
  Outcome o;
  const auto& corpus = shared_corpus();
  std::size_t started_true = 0;
  for (const auto& t : corpus.tasks) {
    try {
      if (verify::evaluate(tasksynth::prepare_workspace(t), t.evaluator)) ++started_true;
    } catch (const GenerationError&) {
      ++started_true;
    }
  }
  o.require(started_true == 0, std::to_string(started_true) + " tasks hold at reset");
  o.note(std::to_string(corpus.tasks.size()) + " tasks all start false");

  const auto registry = toolforge::builtin_registry();
  rollout::ReferenceGrounder grounder;
  rollout::EpisodeConfig cfg;
  cfg.max_steps = kOracleStepBudget;
  rollout::OraclePlanner oracle;
  std::size_t ef = 0, solved = 0;
  for (const auto& t : corpus.tasks) {
    if (t.strategy != tasksynth::Strategy::evaluator_first) continue;
    ++ef;
    solved += rollout::run_episode(t, oracle, grounder, registry, cfg, 0).success ? 1 : 0;
  }
  const double rate = static_cast<double>(solved) / static_cast<double>(ef);
  o.require(ef == kCorpusEvaluatorFirst, "evaluator-first count " + std::to_string(ef));
  o.require(rate >= kOracleSolvedMin, "oracle solve rate " + fmt("%.4f", rate));
  o.note("oracle solves " + fmt("%.4f", rate) + " of " + std::to_string(ef) + " evaluator-first tasks in " +
         std::to_string(kOracleStepBudget) + " steps");

  const auto stats = json::parse(output(corpus.synth, "corpus_stats.json"))["stats"]["rows"];
  double ef_sr = -1, if_sr = -1;
  for (const auto& row : stats) {
    if (row["strategy"] == "evaluator_first") ef_sr = row["success_rate"].get<double>();
    if (row["strategy"] == "instruction_first") if_sr = row["success_rate"].get<double>();
  }
  o.require(ef_sr >= 0 && if_sr >= 0, "stats rows present");
  o.require(if_sr >= ef_sr, "instruction-first SR " + fmt("%.4f", if_sr) + " < evaluator-first " + fmt("%.4f", ef_sr));
  o.note("instruction-planner SR: instruction-first " + fmt("%.4f", if_sr) + " vs evaluator-first " +
         fmt("%.4f", ef_sr));
  return o;
}

Outcome hybrid_efficiency() {
  Outcome o;
  const auto& corpus = shared_corpus();
  auto run = [&](std::size_t cap) {
    cli::RunConfig cfg;
    cfg.command = "rollout";
    cfg.corpus = corpus.path;
    cfg.planner = "oracle";
    cfg.epsilon = 0.0;
    cfg.k = 4;
    cfg.tool_cap = cap;
    return json::parse(output(cli::run_command(cfg), "metrics.json"));
  };
  const auto hybrid = run(toolforge::kDefaultToolCap);
  const auto gui = run(0);
  o.require(hybrid["tool_solvable_ids"] == gui["tool_solvable_ids"], "same subset under both caps");
  const auto& h = hybrid["tool_solvable"];
  const auto& g = gui["tool_solvable"];
  o.require(!h.is_null() && !g.is_null(), "non-empty tool-solvable subset");
  if (h.is_null() || g.is_null()) return o;
  const double h_sr = h["success_rate"], g_sr = g["success_rate"];
  const double h_steps = h["avg_steps"], g_steps = g["avg_steps"];
  o.require(h_sr >= g_sr, "hybrid SR " + fmt("%.4f", h_sr) + " < GUI-only " + fmt("%.4f", g_sr));
  o.require(h_steps <= g_steps, "hybrid steps " + fmt("%.3f", h_steps) + " > GUI-only " + fmt("%.3f", g_steps));
  o.note(std::to_string(h["task_count"].get<std::size_t>()) + " tool-solvable tasks; SR " + fmt("%.4f", h_sr) +
         " vs " + fmt("%.4f", g_sr) + ", avg steps " + fmt("%.3f", h_steps) + " vs " + fmt("%.3f", g_steps));
  return o;
}

Outcome sft_construction() {
  Outcome o;
  const auto library = verify::atomic_library();
  tasksynth::TemplateProposer proposer;
  const auto tasks = tasksynth::gen_evaluator_first(library, proposer, 30, 8);
  const auto registry = toolforge::builtin_registry();
  rollout::ReferenceGrounder grounder;
  rollout::NoisyPlanner planner(std::make_unique<rollout::OraclePlanner>(), 0.1);
  std::vector<rollout::Trajectory> trajs;
  for (const auto& t : tasks) {
    for (auto& tr : rollout::run_batch(t, planner, grounder, registry, rollout::EpisodeConfig{}, 2, 5)) {
      trajs.push_back(std::move(tr));
    }
  }
  const auto persisted = rollout::trajectories_from_jsonl(rollout::trajectories_to_jsonl(trajs));
  std::size_t bad_count = 0, bad_mask = 0, bad_context = 0, samples_total = 0;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const auto samples = learn::build_sft_samples(trajs[i]);
    samples_total += samples.size();
    const auto convo = learn::conversation(persisted[i]);
    const auto assistants = static_cast<std::size_t>(std::count_if(
        convo.begin(), convo.end(), [](const learn::ChatTurn& c) { return c.role == "assistant"; }));
    if (samples.size() != assistants || assistants != trajs[i].steps.size()) ++bad_count;
    for (const auto& s : samples) {
      const bool one = std::count(s.loss_mask.begin(), s.loss_mask.end(), true) == 1 &&
                       s.loss_mask.size() == s.context.size() + 1 && s.loss_mask[s.target_index] &&
                       s.target.role == "assistant";
      if (!one) ++bad_mask;
    }
    if (learn::reconstruct_conversation(samples) != convo) ++bad_context;
  }
  o.require(bad_count == 0, std::to_string(bad_count) + " sample-count mismatches");
  o.require(bad_mask == 0, std::to_string(bad_mask) + " bad loss masks");
  o.require(bad_context == 0, std::to_string(bad_context) + " reconstruction mismatches");
  o.note(std::to_string(trajs.size()) + " trajectories, " + std::to_string(samples_total) + " samples");
  return o;
}

Outcome rl_learning() {
  Outcome o;
  cli::RunConfig cfg;
  cfg.command = "train";
  cfg.corpus = shared_corpus().path;
  cfg.rl_steps = kRlSteps;
  cfg.ablate_tool_reward = true;
  const auto report = json::parse(output(cli::run_command(cfg), "report.json"));
  const auto& with = report["runs"]["r_tool=" + fmt("%g", cfg.tool_bonus)];
  const auto& without = report["runs"]["r_tool=0"];
  const double before = with["before"]["success_rate"], after = with["after"]["success_rate"];
  const double f_with = with["after"]["success_with_tools_fraction"];
  const double f_without = without["after"]["success_with_tools_fraction"];
  o.require(after - before >= kSrGainMin, "SR gain " + fmt("%.4f", after - before));
  o.require(f_with >= f_without, "tools fraction " + fmt("%.4f", f_with) + " < " + fmt("%.4f", f_without));
  o.note(std::to_string(report["band_ids"].size()) + " band tasks; SR " + fmt("%.4f", before) + " -> " +
         fmt("%.4f", after) + "; successful-with-tools " + fmt("%.4f", f_with) + " (r_tool 0.3) vs " +
         fmt("%.4f", f_without) + " (r_tool 0)");
  return o;
}

Outcome determinism() {
  Outcome o;
  const std::string bin = HCUA_CLI_BINARY;
  const std::vector<std::vector<std::string>> pipeline = {
      {"synth", "--seed", "11", "--n-evaluator-first", "120", "--n-instruction-first", "60"},
      {"rollout", "--seed", "11", "--corpus", "{run}/synth/corpus.jsonl"},
      {"rollout", "--seed", "11", "--corpus", "{run}/synth/corpus.jsonl", "--planner", "policy", "--tool-cap", "0"},
      {"difficulty", "--seed", "11", "--corpus", "{run}/synth/corpus.jsonl"},
      {"train", "--seed", "11", "--corpus", "{run}/synth/corpus.jsonl", "--rl-steps", "20", "--ablate-tool-reward"},
      {"export-sft", "--trajectories", "{run}/rollout/trajectories.jsonl"},
      {"tools"},
  };
  std::size_t files = 0;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = scratch_dir() / ("cli" + std::to_string(run));
    fs::create_directories(dir);
    for (std::size_t i = 0; i < pipeline.size(); ++i) {
      std::string cmd = "'" + bin + "'";
      for (std::string arg : pipeline[i]) {
        const auto at = arg.find("{run}");
        if (at != std::string::npos) arg.replace(at, 5, dir.string());
        cmd += " '" + arg + "'";
      }
      const std::string out_name = pipeline[i][0] + (i == 2 ? "-policy" : "");
      cmd += " --out '" + (dir / out_name).string() + "' > '" + (dir / (out_name + ".log")).string() + "' 2>&1";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, out_name + " exited " + std::to_string(rc));
      if (rc != 0) return o;
    }
  }
  const fs::path a = scratch_dir() / "cli0";
  const fs::path b = scratch_dir() / "cli1";
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file() || entry.path().extension() == ".log") continue;
    const auto rel = fs::relative(entry.path(), a);
    ++files;
    o.require(fs::exists(b / rel) && read_file(entry.path()) == read_file(b / rel), rel.string() + " differs");
  }
  std::size_t files_b = 0;
  for (const auto& entry : fs::recursive_directory_iterator(b)) {
    if (entry.is_regular_file() && entry.path().extension() != ".log") ++files_b;
  }
  o.require(files == files_b, "file sets differ");
  o.require(files >= 15, "only " + std::to_string(files) + " output files");
  o.note(std::to_string(pipeline.size()) + " invocations run twice, " + std::to_string(files) +
         " files byte-identical");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "reward truth table", kBudget1, reward_table},
      {2, "propagation conservation", kBudget2, conservation},
      {3, "difficulty and band", kBudget3, difficulty_band},
      {4, "GRPO math", kBudget4, grpo_math},
      {5, "evaluator semantics", kBudget5, evaluator_semantics},
      {6, "synthesis verifiability", kBudget6, synthesis},
      {7, "hybrid efficiency", kBudget7, hybrid_efficiency},
      {8, "SFT construction", kBudget8, sft_construction},
      {9, "end-to-end RL", kBudget9, rl_learning},
      {10, "CLI determinism", kBudget10, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs <= c.budget, "time budget " + fmt("%g", c.budget) + " s");
    if (!o.pass) ++failed;
    std::printf("%s criterion %d (%s): %s [%.2f s of %g s]\n", o.pass ? "PASS" : "FAIL", c.number, c.name,
                o.detail.c_str(), secs, c.budget);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  fs::remove_all(scratch_dir());
  return failed;
}
