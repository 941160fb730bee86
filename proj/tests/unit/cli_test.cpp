#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hcua/cli/commands.hpp"
#include "hcua/rollout/trajectory.hpp"

using namespace hcua;
using namespace hcua::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("hcua_cli_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
};

const std::string& find(const Outputs& out, const std::string& name) {
  for (const auto& f : out) {
    if (f.name == name) return f.content;
  }
  throw std::runtime_error("no output named " + name);
}

RunConfig small_synth() {
  RunConfig cfg;
  cfg.command = "synth";
  cfg.seed = 4;
  cfg.n_evaluator_first = 40;
  cfg.n_instruction_first = 20;
  cfg.k = 2;
  return cfg;
}

rollout::Trajectory traj(bool success, std::size_t steps) {
  rollout::Trajectory t;
  t.task_id = success ? "win" : "loss";
  t.instruction = "Open \"https://example.com/\".";
  t.success = success;
  for (std::size_t i = 0; i < steps; ++i) t.steps.push_back({"key(combo=\"alt+2\")", false, false, {}, "ui", "00", false});
  t.length = steps;
  return t;
}

}  // namespace

TEST_CASE("validation rejects bad configs with usage errors") {
  RunConfig cfg = small_synth();
  CHECK_NOTHROW(validate(cfg));
  cfg.n_evaluator_first = 0;
  cfg.n_instruction_first = 0;
  CHECK_THROWS_AS(validate(cfg), UsageError);

  RunConfig r;
  r.command = "rollout";
  CHECK_THROWS_AS(validate(r), UsageError);
  r.corpus = "/nonexistent/corpus.jsonl";
  CHECK_THROWS_AS(validate(r), UsageError);

  RunConfig p = small_synth();
  p.preset = "osworld-30";
  CHECK_THROWS_AS(validate(p), UsageError);
  p = small_synth();
  p.epsilon = 1.5;
  CHECK_THROWS_AS(validate(p), UsageError);
  p = small_synth();
  p.band_lo = 0.9;
  p.band_hi = 0.1;
  CHECK_THROWS_AS(validate(p), UsageError);
  p = small_synth();
  p.eps_high = 0.1;
  CHECK_THROWS_AS(validate(p), UsageError);
  p = small_synth();
  p.command = "bogus";
  CHECK_THROWS_AS(validate(p), UsageError);
}

TEST_CASE("presets set max_steps unless overridden") {
  RunConfig cfg;
  CHECK(resolved_max_steps(cfg) == 15);
  cfg.preset = "osworld-50";
  CHECK(resolved_max_steps(cfg) == 50);
  cfg.max_steps = 7;
  CHECK(resolved_max_steps(cfg) == 7);
}

TEST_CASE("the config digest ignores the output directory only") {
  RunConfig a = small_synth();
  RunConfig b = a;
  b.out = "elsewhere";
  CHECK(config_digest(a) == config_digest(b));
  b.seed = 5;
  CHECK(config_digest(a) != config_digest(b));
}

TEST_CASE("synth writes a corpus and a two-row stats table") {
  const auto out = run_command(small_synth());
  const auto& corpus = find(out, "corpus.jsonl");
  CHECK(std::count(corpus.begin(), corpus.end(), '\n') == 60);
  const auto stats = nlohmann::json::parse(find(out, "corpus_stats.json"));
  CHECK(stats["stats"]["rows"].size() == 2);
  CHECK(stats["config_digest"] == config_digest(small_synth()));
  CHECK(find(out, "corpus_stats.txt").rfind("config_digest: ", 0) == 0);
  CHECK(run_command(small_synth())[0].content == corpus);
}

TEST_CASE("rollout, train and export-sft on a synthesized corpus") {
  TempDir dir;
  const std::string corpus = dir.file("corpus.jsonl", find(run_command(small_synth()), "corpus.jsonl"));

  RunConfig r;
  r.command = "rollout";
  r.corpus = corpus;
  r.planner = "oracle";
  r.epsilon = 0.0;
  r.k = 4;
  const auto rolled = run_command(r);
  const auto metrics = nlohmann::json::parse(find(rolled, "metrics.json"));
  CHECK(metrics["all"]["pass_at_4"].get<double>() >= metrics["all"]["success_rate"].get<double>());
  CHECK(metrics["all"]["trajectory_count"] == 240);

  RunConfig t;
  t.command = "train";
  t.corpus = corpus;
  t.rl_steps = 2;
  t.lr = 0.0;
  const auto trained = run_command(t);
  const auto report = nlohmann::json::parse(find(trained, "report.json"));
  const auto& run = report["runs"].begin().value();
  CHECK(run["before"]["success_rate"] == run["after"]["success_rate"]);

  t.band_lo = 0.999;
  t.band_hi = 0.9995;
  try {
    run_command(t);
    FAIL("expected an empty band");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("--band-lo") != std::string::npos);
  }

  RunConfig e;
  e.command = "export-sft";
  e.trajectories = dir.file("trajs.jsonl", rollout::trajectories_to_jsonl({traj(true, 3), traj(false, 5)}));
  const auto sft = run_command(e);
  const auto& lines = find(sft, "sft.jsonl");
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 3);
  CHECK(nlohmann::json::parse(find(sft, "sft_report.json"))["successful"] == 1);

  e.trajectories = dir.file("empty.jsonl", "");
  CHECK(find(run_command(e), "sft.jsonl").empty());
}

TEST_CASE("write_outputs leaves only the final files") {
  TempDir dir;
  const std::string out = (dir.path / "nested" / "out").string();
  write_outputs({{"a.txt", "alpha"}, {"b.txt", ""}}, out);
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(out)) names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"a.txt", "b.txt"});
  std::ifstream f(fs::path(out) / "a.txt");
  std::string content;
  std::getline(f, content);
  CHECK(content == "alpha");
}
