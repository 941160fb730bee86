#include "hcua/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "hcua/core/hash.hpp"
#include "hcua/learn/sft.hpp"
#include "hcua/learn/train.hpp"
#include "hcua/rollout/planners.hpp"
#include "hcua/tasksynth/synth.hpp"
#include "hcua/toolforge/tool.hpp"

namespace hcua::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kCommands = {"synth", "rollout", "difficulty", "train", "export-sft", "tools"};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void require_readable(const std::string& path, const std::string& flag) {
  if (path.empty()) throw UsageError(flag + " is required for this command");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw UsageError(flag + ": no such file: " + path);
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string file_digest(const std::string& path) { return path.empty() ? "" : hex64(fnv1a64(read_file(path))); }

toolforge::ToolRegistry load_registry(const RunConfig& cfg) {
  if (cfg.registry.empty()) return toolforge::builtin_registry();
  return toolforge::registry_from_json(nlohmann::json::parse(read_file(cfg.registry)));
}

learn::PolicyParams load_policy(const RunConfig& cfg) {
  if (cfg.policy.empty()) return learn::PolicyParams::initial();
  return learn::policy_from_json(nlohmann::json::parse(read_file(cfg.policy)));
}

std::vector<tasksynth::Task> load_corpus(const RunConfig& cfg) {
  auto tasks = tasksynth::corpus_from_jsonl(read_file(cfg.corpus));
  std::set<std::string> ids;
  for (const auto& t : tasks) {
    if (!ids.insert(t.id).second) throw std::runtime_error("corpus: duplicate task id " + t.id);
  }
  return tasks;
}

rollout::EpisodeConfig episode_config(const RunConfig& cfg) {
  rollout::EpisodeConfig ep;
  ep.max_steps = resolved_max_steps(cfg);
  ep.tool_cap = cfg.tool_cap;
  return ep;
}

/// Owns whatever the chosen planner points into.
struct PlannerBox {
  learn::PolicyParams policy;
  std::unique_ptr<rollout::Planner> planner;
};

PlannerBox make_planner(const RunConfig& cfg) {
  PlannerBox box;
  if (cfg.planner == "policy") {
    box.policy = load_policy(cfg);
    box.planner = std::make_unique<learn::PolicyPlanner>(box.policy);
    return box;
  }
  std::unique_ptr<rollout::Planner> base;
  if (cfg.planner == "oracle") base = std::make_unique<rollout::OraclePlanner>();
  else base = std::make_unique<rollout::InstructionPlanner>();
  if (cfg.epsilon > 0.0) base = std::make_unique<rollout::NoisyPlanner>(std::move(base), cfg.epsilon);
  box.planner = std::move(base);
  return box;
}

using TrajMap = std::map<std::string, std::vector<rollout::Trajectory>>;

TrajMap run_all(const std::vector<tasksynth::Task>& tasks, rollout::Planner& planner,
                const toolforge::ToolRegistry& registry, const rollout::EpisodeConfig& ep, std::size_t k,
                std::uint64_t stream) {
  rollout::ReferenceGrounder grounder;
  TrajMap out;
  for (const auto& t : tasks) {
    out[t.id] = rollout::run_batch(t, planner, grounder, registry, ep, k, derive_seed(stream, t.id));
  }
  return out;
}

/// Tasks whose every goal leaf has a tool route under the default cap.
std::vector<std::string> tool_solvable(const std::vector<tasksynth::Task>& tasks,
                                       const toolforge::ToolRegistry& registry) {
  std::vector<std::string> ids;
  for (const auto& t : tasks) {
    const auto exposed = toolforge::expose(registry, t.domain, toolforge::kDefaultToolCap);
    const auto leaves = rollout::goal_leaves(t.evaluator);
    bool ok = !leaves.empty();
    for (const auto& leaf : leaves) ok = ok && rollout::tool_script(leaf, exposed).has_value();
    if (ok) ids.push_back(t.id);
  }
  return ids;
}

std::string header(const RunConfig& cfg) { return "config_digest: " + config_digest(cfg) + "\n"; }

nlohmann::json stamped(const RunConfig& cfg, nlohmann::json body) {
  body["config_digest"] = config_digest(cfg);
  body["config"] = config_json(cfg);
  return body;
}

std::string json_file(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

std::string band_text(double lo, double hi) { return "[" + fmt("%g", lo) + ", " + fmt("%g", hi) + "]"; }

}  // namespace

std::size_t resolved_max_steps(const RunConfig& cfg) {
  if (cfg.max_steps) return *cfg.max_steps;
  if (cfg.preset == "osworld-50") return 50;
  return 15;
}

void validate(const RunConfig& cfg) {
  if (!kCommands.count(cfg.command)) throw UsageError("unknown command: " + cfg.command);
  if (cfg.preset != "osworld-15" && cfg.preset != "osworld-50") {
    throw UsageError("--preset must be osworld-15 or osworld-50, got " + cfg.preset);
  }
  if (cfg.max_steps && *cfg.max_steps == 0) throw UsageError("--max-steps must be positive");
  if (cfg.planner != "oracle" && cfg.planner != "instruction" && cfg.planner != "policy") {
    throw UsageError("--planner must be oracle, instruction or policy, got " + cfg.planner);
  }
  if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0)) throw UsageError("--epsilon must lie in [0, 1]");
  if (cfg.k == 0) throw UsageError("--k must be positive");
  if (!(cfg.band_lo >= 0.0 && cfg.band_lo <= cfg.band_hi && cfg.band_hi <= 1.0)) {
    throw UsageError("band needs 0 <= --band-lo <= --band-hi <= 1");
  }
  if (!(cfg.lr >= 0.0) || !std::isfinite(cfg.lr)) throw UsageError("--lr must be a finite non-negative number");
  if (!(cfg.eps_low > 0.0 && cfg.eps_low <= cfg.eps_high) || !std::isfinite(cfg.eps_high)) {
    throw UsageError("clip needs 0 < --eps-low <= --eps-high");
  }
  if (!(cfg.tool_bonus >= 0.0) || !std::isfinite(cfg.tool_bonus)) {
    throw UsageError("--tool-bonus must be a finite non-negative number");
  }
  if (cfg.weighting != "per-step" && cfg.weighting != "loss-mean") {
    throw UsageError("--weighting must be per-step or loss-mean, got " + cfg.weighting);
  }
  if (cfg.out.empty()) throw UsageError("--out must not be empty");

  if (cfg.command == "synth") {
    if (cfg.n_evaluator_first == 0 && cfg.n_instruction_first == 0) {
      throw UsageError("nothing to synthesize: --n-evaluator-first and --n-instruction-first are both 0");
    }
    if (cfg.n_instruction_first > 0 && cfg.explore_depth == 0) throw UsageError("--explore-depth must be positive");
  }
  if (cfg.command == "rollout" || cfg.command == "difficulty" || cfg.command == "train") {
    require_readable(cfg.corpus, "--corpus");
  }
  if (cfg.command == "train" && cfg.k < 2) throw UsageError("--k is the group size for train and must be at least 2");
  if (cfg.command == "export-sft") require_readable(cfg.trajectories, "--trajectories");
  if (!cfg.registry.empty()) require_readable(cfg.registry, "--registry");
  if (!cfg.policy.empty()) require_readable(cfg.policy, "--policy");
}

nlohmann::json config_json(const RunConfig& cfg) {
  return {{"command", cfg.command},
          {"seed", cfg.seed},
          {"corpus_digest", file_digest(cfg.corpus)},
          {"registry_digest", cfg.registry.empty() ? "builtin" : file_digest(cfg.registry)},
          {"trajectories_digest", file_digest(cfg.trajectories)},
          {"policy_digest", cfg.policy.empty() ? "initial" : file_digest(cfg.policy)},
          {"planner", cfg.planner},
          {"epsilon", cfg.epsilon},
          {"k", cfg.k},
          {"preset", cfg.preset},
          {"max_steps", resolved_max_steps(cfg)},
          {"tool_cap", cfg.tool_cap},
          {"band_lo", cfg.band_lo},
          {"band_hi", cfg.band_hi},
          {"rl_steps", cfg.rl_steps},
          {"lr", cfg.lr},
          {"eps_low", cfg.eps_low},
          {"eps_high", cfg.eps_high},
          {"tool_bonus", cfg.tool_bonus},
          {"ablate_tool_reward", cfg.ablate_tool_reward},
          {"weighting", cfg.weighting},
          {"n_evaluator_first", cfg.n_evaluator_first},
          {"n_instruction_first", cfg.n_instruction_first},
          {"explore_depth", cfg.explore_depth}};
}

std::string config_digest(const RunConfig& cfg) { return hex64(fnv1a64(config_json(cfg).dump())); }

// ---------------------------------------------------------------------------

Outputs cmd_synth(const RunConfig& cfg) {
  const std::uint64_t stream = derive_seed(cfg.seed, "synth");
  tasksynth::TemplateProposer proposer;
  tasksynth::GenerationLog log;
  std::vector<tasksynth::Task> tasks;
  if (cfg.n_evaluator_first > 0) {
    const auto library = verify::atomic_library();
    tasks = tasksynth::gen_evaluator_first(library, proposer, cfg.n_evaluator_first,
                                           derive_seed(stream, "evaluator-first"), &log);
  }
  if (cfg.n_instruction_first > 0) {
    tasksynth::RandomWalker walker;
    const auto states =
        tasksynth::explore(derive_seed(stream, "explore"), walker, cfg.explore_depth, cfg.n_instruction_first);
    auto inf = tasksynth::gen_instruction_first(states, proposer, derive_seed(stream, "instruction-first"), &log);
    if (inf.size() > cfg.n_instruction_first) inf.resize(cfg.n_instruction_first);
    tasks.insert(tasks.end(), inf.begin(), inf.end());
  }

  auto box = make_planner(cfg);
  const auto registry = load_registry(cfg);
  const TrajMap trajs = run_all(tasks, *box.planner, registry, episode_config(cfg), cfg.k, derive_seed(stream, "stats"));
  const auto stats = tasksynth::corpus_stats(tasks, trajs);

  std::string skipped;
  for (const auto& line : log.skipped) skipped += line + "\n";
  nlohmann::json report = stamped(cfg, {{"tasks", tasks.size()},
                                        {"skipped_candidates", log.skipped.size()},
                                        {"stats", tasksynth::stats_json(stats)}});
  return {{"corpus.jsonl", tasksynth::corpus_to_jsonl(tasks)},
          {"corpus_stats.txt", header(cfg) + tasksynth::stats_text(stats)},
          {"corpus_stats.json", json_file(report)},
          {"synth_skipped.txt", skipped}};
}

Outputs cmd_rollout(const RunConfig& cfg) {
  const auto tasks = load_corpus(cfg);
  if (tasks.empty()) throw std::runtime_error("corpus " + cfg.corpus + " has no tasks");
  const auto registry = load_registry(cfg);
  auto box = make_planner(cfg);
  const TrajMap trajs = run_all(tasks, *box.planner, registry, episode_config(cfg), cfg.k,
                                derive_seed(derive_seed(cfg.seed, "rollout"), "episodes"));

  std::vector<rollout::Trajectory> flat;
  for (const auto& t : tasks) flat.insert(flat.end(), trajs.at(t.id).begin(), trajs.at(t.id).end());

  const auto all = rollout::metrics(trajs);
  const auto ids = tool_solvable(tasks, registry);
  TrajMap subset;
  for (const auto& id : ids) subset[id] = trajs.at(id);

  std::string text = header(cfg) + "== all tasks ==\n" + rollout::metrics_text(all);
  text += "== tool-solvable subset (" + std::to_string(ids.size()) + " tasks) ==\n";
  nlohmann::json doc = {{"all", rollout::metrics_json(all)}, {"tool_solvable_ids", ids}};
  if (subset.empty()) {
    text += "none\n";
    doc["tool_solvable"] = nullptr;
  } else {
    const auto sub = rollout::metrics(subset);
    text += rollout::metrics_text(sub);
    doc["tool_solvable"] = rollout::metrics_json(sub);
  }
  return {{"trajectories.jsonl", rollout::trajectories_to_jsonl(flat)},
          {"metrics.txt", text},
          {"metrics.json", json_file(stamped(cfg, doc))}};
}

Outputs cmd_difficulty(const RunConfig& cfg) {
  const auto tasks = load_corpus(cfg);
  const auto registry = load_registry(cfg);
  auto box = make_planner(cfg);
  rollout::ReferenceGrounder grounder;
  const std::uint64_t stream = derive_seed(derive_seed(cfg.seed, "rollout"), "difficulty");
  std::vector<learn::DifficultyRecord> records;
  std::string lines;
  for (const auto& t : tasks) {
    records.push_back(learn::difficulty(t, *box.planner, grounder, registry, episode_config(cfg), cfg.k,
                                        derive_seed(stream, t.id)));
    const auto& r = records.back();
    lines += nlohmann::json{{"task_id", r.task_id}, {"k", r.k}, {"successes", r.successes}, {"score", r.score}}.dump() +
             "\n";
  }
  const auto ids = learn::filter_band(records, cfg.band_lo, cfg.band_hi);
  nlohmann::json band = {{"band_lo", cfg.band_lo}, {"band_hi", cfg.band_hi}, {"scored", records.size()}, {"ids", ids}};
  return {{"difficulty.jsonl", lines}, {"band.json", json_file(stamped(cfg, band))}};
}

namespace {

struct TrainRun {
  std::string label;
  double tool_bonus;
  learn::TrainResult result;
};

std::string pattern_row(const std::string& label, const rollout::ToolPattern& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %8zu %8zu %8zu %8zu\n", label.c_str(), p.success_with_tools,
                p.success_without_tools, p.fail_with_tools, p.fail_without_tools);
  return buf;
}

}  // namespace

Outputs cmd_train(const RunConfig& cfg) {
  const auto tasks = load_corpus(cfg);
  if (tasks.empty()) throw std::runtime_error("corpus " + cfg.corpus + " has no tasks");
  const auto registry = load_registry(cfg);
  const learn::PolicyParams init = load_policy(cfg);
  rollout::ReferenceGrounder grounder;

  learn::TrainConfig tc;
  tc.steps = cfg.rl_steps;
  tc.group_size = cfg.k;
  tc.eval_k = cfg.k;
  tc.lr = cfg.lr;
  tc.clip.eps_low = cfg.eps_low;
  tc.clip.eps_high = cfg.eps_high;
  tc.tool_bonus = cfg.tool_bonus;
  tc.weighting = cfg.weighting == "loss-mean" ? learn::StepWeighting::loss_mean : learn::StepWeighting::per_step;
  tc.episode = episode_config(cfg);
  tc.seed = derive_seed(cfg.seed, "train");

  const auto records = learn::policy_difficulty(tasks, init, registry, grounder, tc);
  const auto ids = learn::filter_band(records, cfg.band_lo, cfg.band_hi);
  if (ids.empty()) {
    throw std::runtime_error("no task has a difficulty score in " + band_text(cfg.band_lo, cfg.band_hi) + " (" +
                             std::to_string(records.size()) +
                             " tasks scored); widen the band with --band-lo/--band-hi or use a different corpus");
  }
  const std::set<std::string> members(ids.begin(), ids.end());
  std::vector<tasksynth::Task> band;
  for (const auto& t : tasks) {
    if (members.count(t.id)) band.push_back(t);
  }

  std::vector<TrainRun> runs;
  runs.push_back({"r_tool=" + fmt("%g", cfg.tool_bonus), cfg.tool_bonus, learn::train(band, init, registry, grounder, tc)});
  if (cfg.ablate_tool_reward) {
    learn::TrainConfig ablated = tc;
    ablated.tool_bonus = 0.0;
    runs.push_back({"r_tool=0", 0.0, learn::train(band, init, registry, grounder, ablated)});
  }

  std::string diff_lines;
  for (const auto& r : records) {
    diff_lines +=
        nlohmann::json{{"task_id", r.task_id}, {"k", r.k}, {"successes", r.successes}, {"score", r.score}}.dump() + "\n";
  }

  std::string text = header(cfg);
  text += "band " + band_text(cfg.band_lo, cfg.band_hi) + ": " + std::to_string(band.size()) + " of " +
          std::to_string(tasks.size()) + " tasks, " + std::to_string(cfg.rl_steps) + " steps, group size " +
          std::to_string(cfg.k) + "\n\n";
  char row[200];
  std::snprintf(row, sizeof row, "%-22s %9s %9s %11s %11s %12s %12s\n", "run", "SR before", "SR after", "reward before",
                "reward after", "tools before", "tools after");
  text += row;
  nlohmann::json runs_json = nlohmann::json::object();
  nlohmann::json logs_json = nlohmann::json::object();
  for (const auto& run : runs) {
    const auto& r = run.result;
    std::snprintf(row, sizeof row, "%-22s %9.4f %9.4f %13.4f %12.4f %12.4f %12.4f\n", run.label.c_str(),
                  r.before.success_rate, r.after.success_rate, r.before.mean_reward, r.after.mean_reward,
                  r.before.success_with_tools_fraction(), r.after.success_with_tools_fraction());
    text += row;
    runs_json[run.label] = {{"tool_bonus", run.tool_bonus},
                            {"before", learn::eval_json(r.before)},
                            {"after", learn::eval_json(r.after)},
                            {"policy", learn::policy_to_json(r.final)}};
    logs_json[run.label] = learn::train_log_json(r);
  }
  text += "\ntool pattern after training (trajectories)\n";
  std::snprintf(row, sizeof row, "%-22s %8s %8s %8s %8s\n", "run", "S+tools", "S-tools", "F+tools", "F-tools");
  text += row;
  for (const auto& run : runs) text += pattern_row(run.label, run.result.after.pattern);
  if (runs.size() == 2) {
    const double with = runs[0].result.after.success_with_tools_fraction();
    const double without = runs[1].result.after.success_with_tools_fraction();
    text += "\nsuccessful-with-tools fraction: " + runs[0].label + " " + fmt("%.4f", with) + ", " + runs[1].label + " " +
            fmt("%.4f", without) + " (" + (with >= without ? "tool reward keeps or raises tool use" : "tool reward lowers tool use") +
            ")\n";
  }

  Outputs out = {
      {"difficulty.jsonl", diff_lines},
      {"train_log.json", json_file(stamped(cfg, {{"band_ids", ids}, {"runs", logs_json}}))},
      {"policy.json", json_file(learn::policy_to_json(runs[0].result.final))},
      {"report.txt", text},
      {"report.json", json_file(stamped(cfg, {{"band_ids", ids}, {"runs", runs_json}}))},
  };
  if (runs.size() == 2) out.push_back({"policy_r_tool_0.json", json_file(learn::policy_to_json(runs[1].result.final))});
  return out;
}

Outputs cmd_export_sft(const RunConfig& cfg) {
  const auto trajs = rollout::trajectories_from_jsonl(read_file(cfg.trajectories));
  std::vector<learn::SftSample> samples;
  std::size_t kept = 0;
  for (const auto& t : trajs) {
    if (!t.success) continue;
    ++kept;
    auto s = learn::build_sft_samples(t);
    samples.insert(samples.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  }
  nlohmann::json report = {{"trajectories", trajs.size()}, {"successful", kept}, {"samples", samples.size()}};
  return {{"sft.jsonl", learn::sft_to_jsonl(samples)}, {"sft_report.json", json_file(stamped(cfg, report))}};
}

Outputs cmd_tools(const RunConfig& cfg) {
  return {{"registry.json", json_file(toolforge::registry_to_json(load_registry(cfg)))}};
}

Outputs run_command(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.command == "synth") return cmd_synth(cfg);
  if (cfg.command == "rollout") return cmd_rollout(cfg);
  if (cfg.command == "difficulty") return cmd_difficulty(cfg);
  if (cfg.command == "train") return cmd_train(cfg);
  if (cfg.command == "export-sft") return cmd_export_sft(cfg);
  return cmd_tools(cfg);
}

void write_outputs(const Outputs& outputs, const std::string& dir) {
  fs::create_directories(dir);
  std::vector<std::pair<fs::path, fs::path>> staged;
  try {
    for (const auto& f : outputs) {
      const fs::path final_path = fs::path(dir) / f.name;
      const fs::path tmp = fs::path(dir) / ("." + f.name + ".tmp");
      std::ofstream s(tmp, std::ios::binary | std::ios::trunc);
      s << f.content;
      s.close();
      if (!s) throw std::runtime_error("cannot write " + tmp.string());
      staged.emplace_back(tmp, final_path);
    }
  } catch (...) {
    for (const auto& [tmp, _] : staged) fs::remove(tmp);
    throw;
  }
  for (const auto& [tmp, final_path] : staged) fs::rename(tmp, final_path);
}

}  // namespace hcua::cli
