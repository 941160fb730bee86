#include "hcua/toolforge/forge.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "hcua/actionspace/action.hpp"
#include "hcua/core/errors.hpp"
#include "hcua/core/hash.hpp"

namespace hcua::toolforge {

namespace {

constexpr std::size_t kMinRunLength = 2;
constexpr std::size_t kMinLiteralLength = 2;

bool starts_with(std::string_view s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

/// JSON-quoted strings in the instruction, plus typed texts that occur in it
/// verbatim. Longest first so that overlapping literals prefer the full match.
std::vector<std::string> instruction_literals(const std::string& instruction, const std::vector<BodyOp>& ops) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < instruction.size(); ++i) {
    if (instruction[i] != '"') continue;
    std::size_t j = i + 1;
    while (j < instruction.size() && instruction[j] != '"') j += instruction[j] == '\\' ? 2 : 1;
    if (j >= instruction.size()) break;
    try {
      out.push_back(nlohmann::json::parse(instruction.substr(i, j - i + 1)).get<std::string>());
    } catch (const nlohmann::json::exception&) {
    }
    i = j;
  }
  for (const auto& op : ops) {
    if (const auto* t = std::get_if<TypeOp>(&op); t && instruction.find(t->text) != std::string::npos) {
      out.push_back(t->text);
    }
  }
  std::erase_if(out, [](const std::string& s) { return s.size() < kMinLiteralLength; });
  std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

class Parameterizer {
 public:
  explicit Parameterizer(std::vector<std::string> literals) : literals_(std::move(literals)) {}

  std::string apply(const std::string& text) {
    std::string out;
    for (std::size_t i = 0; i < text.size();) {
      bool matched = false;
      for (const auto& lit : literals_) {
        if (text.compare(i, lit.size(), lit) == 0) {
          out += "{" + name_for(lit) + "}";
          i += lit.size();
          matched = true;
          break;
        }
      }
      if (!matched) out.push_back(text[i++]);
    }
    return out;
  }

  const std::map<std::string, Scalar>& args() const { return args_; }
  const std::vector<std::string>& order() const { return order_; }

 private:
  std::string name_for(const std::string& literal) {
    for (const auto& [name, value] : args_) {
      if (std::get<std::string>(value) == literal) return name;
    }
    std::string name = "p" + std::to_string(order_.size() + 1);
    args_[name] = literal;
    order_.push_back(name);
    return name;
  }

  std::vector<std::string> literals_;
  std::map<std::string, Scalar> args_;
  std::vector<std::string> order_;
};

std::vector<BodyOp> inline_tool(const ToolSpec& spec, const std::map<std::string, Scalar>& args, bool& ok) {
  std::vector<BodyOp> out;
  for (const auto& op : spec.body) {
    if (const auto* k = std::get_if<KeyOp>(&op)) {
      out.push_back(*k);
    } else if (const auto* t = std::get_if<TypeOp>(&op)) {
      out.push_back(TypeOp{substitute(t->text, args)});
    } else if (const auto* s = std::get_if<StateOp>(&op)) {
      StateOp concrete{s->target, {}, substitute(s->value, args)};
      for (const auto& a : s->address) concrete.address.push_back(substitute(a, args));
      out.push_back(std::move(concrete));
    } else {
      ok = false;
    }
  }
  return out;
}

std::string effect_text(const std::string& effect_log) {
  std::string e = starts_with(effect_log, "mutate: ") ? effect_log.substr(8) : effect_log;
  if (starts_with(e, "tool ")) {
    const std::size_t colon = e.find(": ");
    e = colon == std::string::npos ? std::string{} : e.substr(colon + 2);
  }
  return e;
}

world::App effect_domain(const std::string& effect) {
  if (starts_with(effect, "setting keybindings.") || starts_with(effect, "setting editor.") ||
      starts_with(effect, "setting writer.") || starts_with(effect, "saved ") || starts_with(effect, "wrote ")) {
    return world::App::editor;
  }
  if (starts_with(effect, "setting ")) return world::App::settings;
  if (starts_with(effect, "bookmark") || starts_with(effect, "navigated")) return world::App::browser;
  if (starts_with(effect, "cell")) return world::App::sheet;
  return world::App::files;
}

std::string slug(const std::string& effect) {
  std::string out;
  std::size_t words = 0;
  std::size_t i = 0;
  while (i < effect.size() && words < 2) {
    const std::size_t end = std::min(effect.find(' ', i), effect.size());
    const std::string word = effect.substr(i, end - i);
    if (word.empty() || !std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; })) break;
    out += (out.empty() ? "" : "_") + word;
    ++words;
    i = end + 1;
  }
  return out.empty() ? "run" : out;
}

std::string describe_op(const BodyOp& op) {
  if (const auto* k = std::get_if<KeyOp>(&op)) return "key " + k->combo;
  if (const auto* t = std::get_if<TypeOp>(&op)) return "type " + nlohmann::json(t->text).dump();
  if (const auto* s = std::get_if<StateOp>(&op)) return std::string(target_name(s->target)) + " edit";
  return "pointer";
}

std::string mined_doc(const std::vector<BodyOp>& body, const std::string& effect, const std::string& task_id) {
  std::string doc;
  // A setting change names the setting it touched, e.g. keybindings.ctrl+j.
  if (starts_with(effect, "setting ")) {
    const std::size_t eq = effect.find(" = ");
    doc += "Create or update the setting " + effect.substr(8, eq == std::string::npos ? std::string::npos : eq - 8) +
           ". ";
  }
  doc += "Replays ";
  for (std::size_t i = 0; i < body.size(); ++i) doc += (i == 0 ? "" : ", ") + describe_op(body[i]);
  doc += ". Mined from task " + task_id + ", where it did: " + effect + ".";
  return doc;
}

struct Segment {
  std::vector<BodyOp> ops;
  std::size_t first = 0;
  std::size_t count = 0;
};

std::optional<MinedCandidate> candidate(const Segment& seg, const std::string& effect_log,
                                        const rollout::Trajectory& traj, const ToolRegistry* registry) {
  if (seg.count < kMinRunLength) return std::nullopt;
  Parameterizer params(instruction_literals(traj.instruction, seg.ops));
  std::vector<BodyOp> body;
  for (const auto& op : seg.ops) {
    if (const auto* t = std::get_if<TypeOp>(&op)) {
      body.push_back(TypeOp{params.apply(t->text)});
    } else if (const auto* s = std::get_if<StateOp>(&op)) {
      StateOp templ{s->target, {}, params.apply(s->value)};
      for (const auto& a : s->address) templ.address.push_back(params.apply(a));
      body.push_back(std::move(templ));
    } else {
      body.push_back(op);
    }
  }
  if (params.order().empty()) return std::nullopt;
  // Literal braces in typed text would read as placeholders; such runs cannot
  // be expressed as templates.
  for (std::size_t i = 0; i < body.size(); ++i) {
    const auto* t = std::get_if<TypeOp>(&body[i]);
    if (t && substitute(t->text, params.args()) != std::get<TypeOp>(seg.ops[i]).text) return std::nullopt;
  }

  const std::string effect = effect_text(effect_log);
  MinedCandidate c;
  c.spec.source = ToolSource::mined;
  c.spec.body = std::move(body);
  c.spec.domain = effect_domain(effect);
  if (starts_with(effect_log, "mutate: tool ") && registry != nullptr) {
    const std::string name = effect_log.substr(13, effect_log.find(':', 13) - 13);
    if (const ToolSpec* t = registry->find(name)) c.spec.domain = t->domain;
  }
  for (const auto& name : params.order()) {
    c.spec.params.push_back(ToolParam{name, ScalarType::string, true,
                                      "value such as " + nlohmann::json(std::get<std::string>(params.args().at(name))).dump()});
  }
  c.spec.doc = mined_doc(c.spec.body, effect, traj.task_id);
  nlohmann::json body_json = spec_to_json(c.spec)["body"];
  c.spec.name = "mined." + slug(effect) + "_" + hex64(fnv1a64(body_json.dump())).substr(0, 8);
  c.args = params.args();
  c.first_step = seg.first;
  c.last_step = seg.first + seg.count - 1;
  return c;
}

}  // namespace

std::vector<MinedCandidate> mine_from_trajectory(const rollout::Trajectory& traj, const ToolRegistry* registry) {
  std::vector<MinedCandidate> out;
  Segment seg;
  auto reset = [&](std::size_t next) { seg = Segment{{}, next, 0}; };
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    const rollout::StepRecord& rec = traj.steps[i];
    if (rec.malformed || rec.invalid || rec.tool_error) {
      reset(i + 1);
      continue;
    }
    actionspace::Action action;
    try {
      action = actionspace::parse_step(rec.raw_step).action;
    } catch (const ParseError&) {
      reset(i + 1);
      continue;
    }
    bool ok = true;
    std::vector<BodyOp> ops;
    if (const auto* k = std::get_if<world::KeyPress>(&action)) {
      ops.push_back(KeyOp{k->combo});
    } else if (const auto* t = std::get_if<world::TypeText>(&action)) {
      ops.push_back(TypeOp{t->text});
    } else if (const auto* call = std::get_if<actionspace::ToolCall>(&action)) {
      const ToolSpec* spec = registry != nullptr ? registry->find(call->name) : nullptr;
      if (spec == nullptr) ok = false;
      else ops = inline_tool(*spec, call->args, ok);
    } else {
      ok = false;
    }
    if (!ok) {
      reset(i + 1);
      continue;
    }
    if (seg.count == 0) seg.first = i;
    for (auto& op : ops) seg.ops.push_back(std::move(op));
    ++seg.count;
    if (starts_with(rec.effect_log, "mutate: ")) {
      if (auto c = candidate(seg, rec.effect_log, traj, registry)) out.push_back(std::move(*c));
      reset(i + 1);
    }
  }
  return out;
}

bool ValidationReport::all_passed() const {
  if (structural_error || results.empty()) return false;
  return std::all_of(results.begin(), results.end(), [](const FixtureResult& r) { return r.passed; });
}

ValidationReport validate(const ToolSpec& spec, const std::vector<ValidationFixture>& fixtures) {
  if (fixtures.empty()) throw std::invalid_argument("validate: no fixtures");
  ValidationReport report;
  try {
    check_spec(spec);
  } catch (const RegistryError& e) {
    report.structural_error = e.what();
    return report;
  }
  for (const auto& fx : fixtures) {
    FixtureResult r;
    actionspace::ExecTrace trace;
    world::StepOutcome out = actionspace::run_tool(fx.state, spec, fx.args, &trace);
    r.coordinate_transitions = trace.coordinate_transitions;
    r.detail = out.effect_log;
    if (out.tool_error) {
      r.rolled_back = world::same_content(out.next_state, fx.state);
    } else {
      r.passed = trace.coordinate_transitions == 0 && verify::evaluate(out.next_state, fx.expect);
      if (!r.passed) r.detail += " (expectation not met)";
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace hcua::toolforge
