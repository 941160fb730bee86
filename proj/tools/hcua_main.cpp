// hcua: synthesize tasks, run rollouts, score difficulty, train and export
// SFT data. Every flag can also come from a config file (--config, TOML or
// INI) or from an HCUA_* environment variable; flags win over the file, and
// the file wins over the environment.

#include <cctype>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hcua/cli/commands.hpp"

namespace {

std::string env_name(const std::string& flag) {
  std::string out = "HCUA_";
  for (char c : flag.substr(2)) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
CLI::Option* flag(CLI::App& app, const std::string& name, T& value, const std::string& help) {
  return app.add_option(name, value, help)->envname(env_name(name))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using hcua::cli::RunConfig;
  RunConfig cfg;
  std::size_t max_steps = 0;

  CLI::App app{"hybrid GUI and tool-call agent pipeline"};
  app.set_config("--config", "", "read flags from a TOML or INI file");
  app.require_subcommand(1);
  app.fallthrough();

  flag(app, "--seed", cfg.seed, "root seed; synth, rollout and train use named sub-streams of it");
  flag(app, "--corpus", cfg.corpus, "task corpus (JSONL)");
  flag(app, "--registry", cfg.registry, "tool catalog (JSON); the built-in catalog when empty");
  flag(app, "--trajectories", cfg.trajectories, "trajectory file for export-sft (JSONL)");
  flag(app, "--policy", cfg.policy, "policy table for --planner policy and the start of train");
  flag(app, "--planner", cfg.planner, "oracle, instruction or policy");
  flag(app, "--epsilon", cfg.epsilon, "per-step probability of a random action (oracle and instruction)");
  flag(app, "--k", cfg.k, "rollouts per task; the group size in train");
  flag(app, "--preset", cfg.preset, "osworld-15 or osworld-50 (sets max steps)");
  auto* max_opt = app.add_option("--max-steps", max_steps, "step budget; overrides the preset")
                      ->envname("HCUA_MAX_STEPS");
  flag(app, "--tool-cap", cfg.tool_cap, "tools exposed per episode; 0 gives GUI-only episodes");
  flag(app, "--band-lo", cfg.band_lo, "lower end of the difficulty band (inclusive)");
  flag(app, "--band-hi", cfg.band_hi, "upper end of the difficulty band (inclusive)");
  flag(app, "--rl-steps", cfg.rl_steps, "policy updates in train");
  flag(app, "--lr", cfg.lr, "learning rate");
  flag(app, "--eps-low", cfg.eps_low, "lower clip range");
  flag(app, "--eps-high", cfg.eps_high, "upper clip range");
  flag(app, "--tool-bonus", cfg.tool_bonus, "reward added to successful trajectories that called a tool");
  app.add_flag("--ablate-tool-reward", cfg.ablate_tool_reward, "train: also run with tool bonus 0 and compare")
      ->envname("HCUA_ABLATE_TOOL_REWARD");
  flag(app, "--weighting", cfg.weighting, "per-step or loss-mean");
  flag(app, "--n-evaluator-first", cfg.n_evaluator_first, "synth: evaluator-first tasks");
  flag(app, "--n-instruction-first", cfg.n_instruction_first, "synth: instruction-first tasks (also the walk count)");
  flag(app, "--explore-depth", cfg.explore_depth, "synth: actions per exploration walk");
  flag(app, "--out", cfg.out, "output directory");

  app.add_subcommand("synth", "generate a corpus with both strategies and a stats table");
  app.add_subcommand("rollout", "run K episodes per task and write trajectories and metrics");
  app.add_subcommand("difficulty", "score every task and list the band members");
  app.add_subcommand("train", "band-filter the corpus and run the RL loop");
  app.add_subcommand("export-sft", "turn successful trajectories into per-turn SFT samples");
  app.add_subcommand("tools", "write the tool catalog in effect");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (max_opt->count() > 0) cfg.max_steps = max_steps;

  try {
    const auto outputs = hcua::cli::run_command(cfg);
    hcua::cli::write_outputs(outputs, cfg.out);
    for (const auto& f : outputs) std::cout << cfg.out << "/" << f.name << "\n";
  } catch (const hcua::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
