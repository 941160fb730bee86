#include "doctest.h"
#include "hcua/actionspace/action.hpp"
#include "hcua/core/errors.hpp"
#include "support/walk.hpp"

using namespace hcua;
using namespace hcua::actionspace;

namespace {

std::string random_text(Rng& rng) {
  static const std::array<std::string, 12> kPieces = {
      "a", "Z", " ", "\"", "\\", "\n", "\t", "</memory>", "</memo", "é", "{p1}", "<memory>"};
  std::string out;
  const std::size_t n = rng.below(6);
  for (std::size_t i = 0; i < n; ++i) out += kPieces[rng.below(kPieces.size())];
  return out;
}

Scalar random_scalar(Rng& rng) {
  switch (rng.below(4)) {
    case 0: return rng.chance(0.5);
    case 1: return static_cast<std::int64_t>(rng.next());
    case 2: {
      const double mags[] = {0.0, 1.0, 1e-300, 12345.678, 1e300, 0.1};
      const double v = mags[rng.below(6)] * (rng.chance(0.5) ? -1.0 : 1.0) * (1.0 + rng.uniform());
      return v;
    }
    default: return random_text(rng);
  }
}

Action random_action(Rng& rng) {
  auto coord = [&rng] { return static_cast<int>(rng.below(3000)) - 1000; };
  switch (rng.below(7)) {
    case 0: return world::Click{coord(), coord()};
    case 1: return world::DoubleClick{coord(), coord()};
    case 2: return world::TypeText{random_text(rng)};
    case 3: return world::KeyPress{random_text(rng)};
    case 4: return world::Scroll{coord()};
    case 5: return Done{rng.chance(0.5)};
    default: {
      static const std::array<std::string, 4> kNames = {"set_cell_values", "vscode.set_theme", "a.b_c.d9",
                                                        "tool"};
      ToolCall call{kNames[rng.below(kNames.size())], {}};
      const std::size_t n = rng.below(4);
      for (std::size_t i = 0; i < n; ++i) call.args["arg" + std::to_string(rng.below(5))] = random_scalar(rng);
      return call;
    }
  }
}

world::WorldState sheet_state() {
  world::WorkspaceManifest m;
  m.cells["A1"] = std::string("name");
  return world::reset(1, m);
}

}  // namespace

TEST_CASE("parse the smallest step") {
  const ParsedStep s = parse_step("click(x=40, y=120)");
  CHECK_FALSE(s.memory);
  CHECK(s.action == Action{world::Click{40, 120}});
  CHECK(s.raw == "click(x=40, y=120)");
}

TEST_CASE("memory block and unknown names parse as tool calls") {
  const ParsedStep s =
      parse_step("<memory>Task: star all mail. Next: Ctrl+Shift+O.</memory>\nadd_or_remove_star()");
  REQUIRE(s.memory);
  CHECK(*s.memory == "Task: star all mail. Next: Ctrl+Shift+O.");
  CHECK(s.action == Action{ToolCall{"add_or_remove_star", {}}});

  const ParsedStep t = parse_step(R"(set_cell_values(cells="{\"A2\":\"hello\"}", sheet="Sheet1"))");
  const auto& call = std::get<ToolCall>(t.action);
  CHECK(std::get<std::string>(call.args.at("cells")) == R"({"A2":"hello"})");
}

TEST_CASE("parse errors carry positions") {
  auto position_of = [](std::string_view text) -> std::size_t {
    try {
      parse_step(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    FAIL("expected ParseError for " << text);
    return 0;
  };
  CHECK(position_of("done(success=true) done(success=true)") == 19);
  CHECK(position_of("<memory>never closed click(x=1, y=2)") == 0);
  CHECK(position_of("") == 0);
  CHECK(position_of("click(x=1)") == 0);
  CHECK(position_of("click(x=1, y=2, z=3)") == 0);
  CHECK(position_of("click(x=\"1\", y=2)") == 0);
  CHECK(position_of("type(text=\"abc)") == 10);
  CHECK(position_of("tool(a=1, a=2)") == 10);
  CHECK(position_of("tool(a=01)") == 7);
  CHECK(position_of("Tool()") == 0);
  CHECK(position_of("tool(a=nope)") == 7);
  CHECK(position_of("<memory>a</memory><memory>b</memory>done(success=true)") == 18);
}

TEST_CASE("canonical serialization") {
  CHECK(serialize_step(ParsedStep{std::nullopt, Done{true}, {}}) == "done(success=true)");
  CHECK(serialize_action(ToolCall{"t", {{"b", 2.0}, {"a", std::string("x")}}}) == R"(t(a="x", b=2.0))");
  CHECK(serialize_action(ToolCall{"t", {{"f", 1e300}}}) == "t(f=1e+300)");
  // Non-canonical whitespace normalizes.
  CHECK(serialize_step(parse_step("  <memory>m</memory>   key( combo = \"ctrl+s\" )  ")) ==
        "<memory>m</memory>\nkey(combo=\"ctrl+s\")");
}

TEST_CASE("memory escaping roundtrips") {
  for (std::string m : {"</memory>", "</memo", "a\\b", "\\</memory>", "<\\/memory>", "\\\\/", ""}) {
    const ParsedStep step{m, Done{false}, {}};
    const std::string text = serialize_step(step);
    CHECK(parse_step(text) == step);
    CHECK(unescape_memory(escape_memory(m)) == m);
  }
  CHECK(escape_memory("x</memory>y") == "x<\\/memory>y");
}

TEST_CASE("roundtrip of 1000 random steps") {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    ParsedStep step;
    if (rng.chance(0.5)) step.memory = random_text(rng);
    step.action = random_action(rng);
    const std::string text = serialize_step(step);
    const ParsedStep back = parse_step(text);
    CHECK(back == step);
    CHECK(serialize_step(back) == text);
    CHECK(back.memory.has_value() == (text.find("<memory>") == 0));
  }
}

TEST_CASE("execute: set_cell_values updates cells in one step") {
  const auto registry = toolforge::builtin_registry();
  const auto s = sheet_state();
  const ToolCall call{"set_cell_values", {{"cells", std::string(R"({"A2":"hello","B2":7})")},
                                          {"sheet", std::string("Sheet1")}}};
  const auto out = execute(s, call, registry);
  CHECK_FALSE(out.tool_error);
  CHECK_FALSE(out.invalid);
  CHECK(out.next_state.sheet.cells.at("A2") == Scalar{std::string("hello")});
  CHECK(out.next_state.sheet.cells.at("B2") == Scalar{std::int64_t{7}});
  CHECK(out.next_state.step_counter == s.step_counter + 1);
  CHECK(out.effect_log.rfind("mutate:", 0) == 0);
}

TEST_CASE("execute: tool errors leave state unchanged") {
  const auto registry = toolforge::builtin_registry();
  const auto s = sheet_state();
  auto expect_error = [&](const ToolCall& call, std::string_view code) {
    const auto out = execute(s, call, registry);
    REQUIRE(out.tool_error);
    CHECK(*out.tool_error == code);
    CHECK(world::same_content(out.next_state, s));
    CHECK(out.next_state.step_counter == s.step_counter + 1);
  };
  expect_error(ToolCall{"no_such_tool", {}}, "unknown_tool");
  expect_error(ToolCall{"vscode.set_theme", {}}, "bad_args");
  expect_error(ToolCall{"vscode.set_theme", {{"theme", std::int64_t{3}}}}, "bad_args");
  expect_error(ToolCall{"vscode.set_theme", {{"theme", std::string("x")}, {"extra", true}}}, "bad_args");
  expect_error(ToolCall{"set_cell_values", {{"cells", std::string("{")}, {"sheet", std::string("Sheet1")}}},
               "body_failed");
  expect_error(ToolCall{"set_cell_values", {{"cells", std::string(R"({"A2":1})")}, {"sheet", std::string("S2")}}},
               "body_failed");
  expect_error(ToolCall{"calc.go_to_cell", {{"cell", std::string("Z99")}}}, "body_failed");

  // Fails on the second op (no sheet open) after a successful app switch.
  const auto bare = world::reset(1, world::WorkspaceManifest{});
  const auto out = execute(bare, ToolCall{"calc.go_to_cell", {{"cell", std::string("A1")}}}, registry);
  REQUIRE(out.tool_error);
  CHECK(*out.tool_error == "body_failed");
  CHECK(out.next_state.focus.app == world::App::files);
  CHECK(world::same_content(out.next_state, bare));
}

TEST_CASE("execute: primitives delegate to the world") {
  const auto registry = toolforge::builtin_registry();
  for (const auto& s : testsupport::random_states(4, 5, 8)) {
    const auto screen = world::render(s);
    for (const auto& e : screen.elements) {
      auto [x, y] = e.bbox.center();
      const auto a = execute(s, world::Click{x, y}, registry);
      const auto b = world::apply_primitive(s, world::Click{x, y});
      CHECK(a.next_state == b.next_state);
      CHECK(a.invalid == b.invalid);
      CHECK(a.effect_log == b.effect_log);
      CHECK_FALSE(a.tool_error);
    }
  }
  const auto s = sheet_state();
  const auto done = execute(s, Done{true}, registry);
  CHECK(world::same_content(done.next_state, s));
  CHECK_FALSE(done.invalid);
}

TEST_CASE("tool atomicity and grounding-free replay over every tool") {
  const auto registry = toolforge::builtin_registry();
  Rng rng(17);
  const std::array<std::string, 8> pool = {"/home/user/a.txt", "/home/user/New", "Dark+", "A2",
                                           R"({"B3":"x"})", "Sheet1", "https://docs.python.org", "ctrl+j"};
  std::size_t applied = 0, failed = 0;
  for (const auto& s : testsupport::random_states(8, 10, 12)) {
    for (const auto& [name, spec] : registry.tools()) {
      std::map<std::string, Scalar> args;
      for (const auto& p : spec.params) {
        if (p.type == ScalarType::boolean) args[p.name] = rng.chance(0.5);
        else args[p.name] = pool[rng.below(pool.size())];
      }
      ExecTrace trace;
      const auto out = execute(s, ToolCall{name, args}, registry, &trace);
      CHECK(trace.coordinate_transitions == 0);
      CHECK(out.next_state.step_counter == s.step_counter + 1);
      if (out.tool_error) {
        ++failed;
        CHECK(world::same_content(out.next_state, s));
        continue;
      }
      ++applied;
      // Key/type-only bodies must equal stepping the primitives by hand.
      bool keyboard_only = true;
      world::WorldState manual = s;
      for (const auto& op : spec.body) {
        if (const auto* k = std::get_if<toolforge::KeyOp>(&op)) {
          manual = world::apply_primitive(manual, world::KeyPress{k->combo}).next_state;
        } else if (const auto* t = std::get_if<toolforge::TypeOp>(&op)) {
          manual = world::apply_primitive(manual, world::TypeText{toolforge::substitute(t->text, args)}).next_state;
        } else {
          keyboard_only = false;
        }
      }
      if (keyboard_only) CHECK(world::same_content(manual, out.next_state));
    }
  }
  CHECK(applied > 0);
  CHECK(failed > 0);
}
