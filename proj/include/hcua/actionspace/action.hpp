#pragma once

// Hybrid actions, the textual step protocol and the dispatcher.
//
// Step grammar (whitespace allowed between tokens):
//   step    := [ "<memory>" text "</memory>" ] call
//   call    := name "(" [ kwarg { "," kwarg } ] ")"
//   kwarg   := ident "=" scalar
//   scalar  := json-string | integer | float | "true" | "false"
// Floats always carry a '.' or an exponent. Inside memory text, "\" is written
// as "\\" and "</memory>" as "<\/memory>".

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "hcua/core/scalar.hpp"
#include "hcua/toolforge/tool.hpp"
#include "hcua/world/world.hpp"

namespace hcua::actionspace {

struct ToolCall {
  std::string name;
  std::map<std::string, Scalar> args;
  bool operator==(const ToolCall&) const = default;
};

struct Done {
  bool claims_success = false;
  bool operator==(const Done&) const = default;
};

using Action = std::variant<world::Click, world::DoubleClick, world::TypeText, world::KeyPress,
                            world::Scroll, ToolCall, Done>;

bool is_tool_call(const Action& a);
bool is_grounding_free(const Action& a);  // key, type, tool call or done

struct ParsedStep {
  std::optional<std::string> memory;
  Action action;
  std::string raw;
  /// Equality of content; raw text is ignored.
  bool operator==(const ParsedStep& other) const {
    return memory == other.memory && action == other.action;
  }
};

/// Throws ParseError with the byte offset of the problem.
ParsedStep parse_step(std::string_view text);
/// Canonical text; parse_step(serialize_step(s)) == s.
std::string serialize_step(const ParsedStep& step);
std::string serialize_action(const Action& action);

std::string escape_memory(std::string_view text);
std::string unescape_memory(std::string_view text);

/// Counts of world transitions performed, split by whether they needed a
/// screen coordinate.
struct ExecTrace {
  std::size_t coordinate_transitions = 0;
  std::size_t keyboard_transitions = 0;
  std::size_t state_ops = 0;
};

/// Never throws for bad input: faults are reported through invalid/tool_error.
world::StepOutcome execute(const world::WorldState& state, const Action& action,
                           const toolforge::ToolRegistry& registry, ExecTrace* trace = nullptr);

/// Runs a spec directly (without registry lookup); used by validation.
world::StepOutcome run_tool(const world::WorldState& state, const toolforge::ToolSpec& spec,
                            const std::map<std::string, Scalar>& args, ExecTrace* trace = nullptr);

}  // namespace hcua::actionspace
