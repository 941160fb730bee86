#include "doctest.h"
#include "hcua/actionspace/action.hpp"
#include "hcua/core/errors.hpp"
#include "hcua/core/rng.hpp"
#include "hcua/verify/evaluator.hpp"
#include "support/formulas.hpp"
#include "support/walk.hpp"

using namespace hcua;
using namespace hcua::verify;
using nlohmann::json;

TEST_CASE("check_atomic examples") {
  const auto s = world::reset(1, testsupport::desk_manifest());
  CHECK(check_atomic(s, file_exists("/home/user/a.txt")));
  CHECK_FALSE(check_atomic(s, file_exists("/home/user/b.txt")));
  CHECK_FALSE(check_atomic(world::reset(1, {}), url_equals("https://docs.python.org")));
  CHECK(check_atomic(s, file_content_equals("/home/user/Documents/notes.md", "# notes")));
  CHECK(check_atomic(s, file_content_equals("/home/user/Documents/notes.md", "# notes\n\n")));
  CHECK_FALSE(check_atomic(s, file_content_equals("/home/user/Documents/notes.md", "# notes ")));
  CHECK_FALSE(check_atomic(s, file_content_equals("/home/user/Documents", "")));
  CHECK(check_atomic(s, setting_equals("editor", "theme", "Light")));
  CHECK_FALSE(check_atomic(s, setting_equals("editor", "font", "Light")));
  CHECK(check_atomic(s, bookmark_exists("Docs", "Bookmarks bar")));
  CHECK_FALSE(check_atomic(s, bookmark_exists("Docs", "Other")));
  CHECK(check_atomic(s, clipboard_equals("")));
  CHECK(check_atomic(s, cell_value_equals("A1", std::string("name"))));
  CHECK_FALSE(check_atomic(s, cell_value_equals("B9", std::string(""))));
}

TEST_CASE("cell check after the set_cell_values tool") {
  world::WorkspaceManifest m;
  m.sheet_path = "/home/user/Sheet1.csv";
  const auto s = world::reset(1, m);
  const auto registry = toolforge::builtin_registry();
  const auto out = actionspace::execute(
      s, actionspace::ToolCall{"set_cell_values", {{"cells", std::string(R"({"A2":"hello","A3":"2.50"})")},
                                                   {"sheet", std::string("Sheet1")}}},
      registry);
  CHECK_FALSE(check_atomic(s, cell_value_equals("A2", std::string("hello"))));
  CHECK(check_atomic(out.next_state, cell_value_equals("A2", std::string("hello"))));
  CHECK(check_atomic(out.next_state, cell_value_equals("A3", 2.5)));
}

TEST_CASE("reprogram") {
  const auto a = file_exists("/a");
  CHECK(reprogram(a, {{"path", std::string("/b")}}) == file_exists("/b"));
  CHECK(a == file_exists("/a"));
  CHECK(reprogram(a, {}) == a);
  CHECK_THROWS_AS(reprogram(a, {{"url", std::string("/b")}}), SubstitutionError);
  CHECK_THROWS_AS(reprogram(a, {{"path", std::int64_t{3}}}), EvaluatorError);
  CHECK_THROWS_AS(reprogram(a, {{"path", std::string("relative")}}), EvaluatorError);
}

TEST_CASE("compose") {
  const auto file = file_exists("/home/user/Documents/tutorial.pdf");
  const auto url = url_equals("https://docs.python.org");
  const auto cfg = compose({file, url}, Combinator::all);
  CHECK(config_to_json(cfg) == json::parse(R"({"all":[
      {"kind":"file_exists","params":{"path":"/home/user/Documents/tutorial.pdf"}},
      {"kind":"url_equals","params":{"url":"https://docs.python.org"}}]})"));
  CHECK(depth(cfg) == 2);
  CHECK_THROWS_AS(compose({}, Combinator::any), EvaluatorError);

  world::WorkspaceManifest m;
  m.start_url = "https://docs.python.org";
  const auto s = world::reset(1, m);
  CHECK_FALSE(evaluate(s, cfg));
  CHECK(evaluate(s, compose({file, url}, Combinator::any)));
  for (unsigned bits = 0; bits < 2; ++bits) {
    const auto t = testsupport::truth_state(bits);
    const auto leaf = testsupport::truth_leaf(0);
    CHECK(evaluate(t, compose({leaf}, Combinator::all)) == check_atomic(t, leaf));
    CHECK(evaluate(t, compose({leaf}, Combinator::any)) == check_atomic(t, leaf));
  }
}

TEST_CASE("evaluate agrees with the boolean formula on every small tree") {
  const auto cases = testsupport::enumerate_formulas(3, kMaxDepth);
  REQUIRE(cases.size() > 100);
  for (unsigned bits = 0; bits < 8; ++bits) {
    const auto s = testsupport::truth_state(bits);
    for (const auto& c : cases) {
      CAPTURE(c.formula);
      CHECK(evaluate(s, c.config) == testsupport::eval_formula(c.formula, bits));
    }
  }
  CHECK(evaluate(testsupport::truth_state(7),
                 EvaluatorConfig::all_of({EvaluatorConfig::leaf(testsupport::truth_leaf(0)),
                                          EvaluatorConfig::leaf(testsupport::truth_leaf(1)),
                                          EvaluatorConfig::leaf(testsupport::truth_leaf(2))})));
}

TEST_CASE("monotone composition") {
  const auto cases = testsupport::enumerate_formulas(2, 3);
  for (unsigned bits = 0; bits < 8; ++bits) {
    const auto s = testsupport::truth_state(bits);
    for (const auto& c : cases) {
      if (c.config.node == EvaluatorConfig::Node::atomic || !evaluate(s, c.config)) continue;
      for (int i = 0; i < 3; ++i) {
        auto grown = c.config;
        const bool leaf_true = (bits >> i) & 1u;
        if (grown.node == EvaluatorConfig::Node::all && !leaf_true) continue;
        grown.children.push_back(EvaluatorConfig::leaf(testsupport::truth_leaf(i)));
        CHECK(evaluate(s, grown));
      }
    }
  }
}

TEST_CASE("evaluation is pure") {
  const auto cfg = compose(atomic_library(), Combinator::any);
  for (const auto& s : testsupport::random_states(3, 5, 10)) {
    const auto copy = s;
    evaluate(s, cfg);
    CHECK(s == copy);
  }
}

TEST_CASE("reprogram and compose closure roundtrips bit-exactly") {
  Rng rng(77);
  const auto library = atomic_library();
  const std::array<Scalar, 6> cell_values = {Scalar{std::int64_t{-4}}, Scalar{0.1}, Scalar{1e-300},
                                             Scalar{true}, Scalar{std::string("α\"\\")}, Scalar{3.0}};
  for (int i = 0; i < 500; ++i) {
    std::vector<EvaluatorConfig> groups;
    const std::size_t n_groups = 1 + rng.below(3);
    for (std::size_t g = 0; g < n_groups; ++g) {
      std::vector<AtomicEvaluator> atoms;
      const std::size_t n = 1 + rng.below(3);
      for (std::size_t k = 0; k < n; ++k) {
        AtomicEvaluator a = library[rng.below(library.size())];
        std::map<std::string, Scalar> subs;
        for (const auto& p : required_params(a.kind)) {
          if (!rng.chance(0.5)) continue;
          if (p.name == "path") subs[p.name] = "/home/user/f" + std::to_string(rng.below(100));
          else if (p.name == "cell") subs[p.name] = "C" + std::to_string(1 + rng.below(50));
          else if (!p.type) subs[p.name] = cell_values[rng.below(cell_values.size())];
          else subs[p.name] = "v" + std::to_string(rng.next() % 1000);
        }
        atoms.push_back(reprogram(a, subs));
      }
      groups.push_back(compose(atoms, rng.chance(0.5) ? Combinator::all : Combinator::any));
    }
    const auto cfg = rng.chance(0.5) ? EvaluatorConfig::all_of(groups) : EvaluatorConfig::any_of(groups);
    const std::string text = config_to_json(cfg).dump();
    const auto back = config_from_json(json::parse(text));
    CHECK(back == cfg);
    CHECK(config_to_json(back).dump() == text);
  }
}

TEST_CASE("config loader rejects malformed trees") {
  const json leaf = atomic_to_json(file_exists("/a"));
  CHECK_THROWS_AS(config_from_json(json{{"all", json::array()}}), EvaluatorError);
  CHECK_THROWS_AS(config_from_json(json{{"kind", "nope"}, {"params", json::object()}}), EvaluatorError);
  CHECK_THROWS_AS(config_from_json(json{{"kind", "file_exists"}, {"params", json::object()}}), EvaluatorError);
  CHECK_THROWS_AS(config_from_json(json{{"kind", "file_exists"}, {"params", {{"path", "/a"}, {"x", 1}}}}),
                  EvaluatorError);
  CHECK_THROWS_AS(config_from_json(json{{"kind", "cell_value_equals"}, {"params", {{"cell", "A0"}, {"value", 1}}}}),
                  EvaluatorError);
  json deep = leaf;
  for (int i = 0; i < 3; ++i) deep = json{{"all", {deep}}};
  CHECK(depth(config_from_json(deep)) == 4);
  CHECK_THROWS_AS(config_from_json(json{{"any", {deep}}}), EvaluatorError);
}

TEST_CASE("library manifest documents every kind") {
  const auto manifest = atomic_library_manifest();
  CHECK(manifest["kinds"].size() == kAllKinds.size());
  for (const auto& e : atomic_library()) CHECK_NOTHROW(validate(e));
}
