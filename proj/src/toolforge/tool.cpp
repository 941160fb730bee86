#include "hcua/toolforge/tool.hpp"

#include <algorithm>
#include <set>

#include "hcua/core/errors.hpp"

namespace hcua::toolforge {

using nlohmann::json;

std::string_view source_name(ToolSource s) {
  switch (s) {
    case ToolSource::documentation: return "documentation";
    case ToolSource::integrated: return "integrated";
    case ToolSource::mined: return "mined";
  }
  return "documentation";
}

std::optional<ToolSource> source_from_name(std::string_view name) {
  for (auto s : {ToolSource::documentation, ToolSource::integrated, ToolSource::mined}) {
    if (source_name(s) == name) return s;
  }
  return std::nullopt;
}

namespace {

constexpr std::array<std::pair<StateTarget, std::string_view>, 11> kTargets = {{
    {StateTarget::create_file, "create_file"},
    {StateTarget::mkdir, "mkdir"},
    {StateTarget::delete_path, "delete"},
    {StateTarget::file_content, "file_content"},
    {StateTarget::append_file, "append_file"},
    {StateTarget::setting, "setting"},
    {StateTarget::cells_json, "cells_json"},
    {StateTarget::clipboard, "clipboard"},
    {StateTarget::url, "url"},
    {StateTarget::bookmark, "bookmark"},
    {StateTarget::open_app, "open_app"},
}};

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

/// Length of a placeholder starting at templ[i] == '{', or 0.
std::size_t placeholder_at(std::string_view templ, std::size_t i) {
  if (templ[i] != '{' || i + 1 >= templ.size() || !ident_start(templ[i + 1])) return 0;
  std::size_t j = i + 2;
  while (j < templ.size() && ident_char(templ[j])) ++j;
  if (j >= templ.size() || templ[j] != '}') return 0;
  return j - i + 1;
}

std::size_t address_arity(StateTarget t) {
  switch (t) {
    case StateTarget::setting:
    case StateTarget::bookmark: return 2;
    case StateTarget::clipboard:
    case StateTarget::url: return 0;
    default: return 1;
  }
}

}  // namespace

std::string_view target_name(StateTarget t) {
  for (const auto& [target, name] : kTargets) {
    if (target == t) return name;
  }
  return "clipboard";
}

std::optional<StateTarget> target_from_name(std::string_view name) {
  for (const auto& [target, n] : kTargets) {
    if (n == name) return target;
  }
  return std::nullopt;
}

const ToolParam* ToolSpec::param(std::string_view n) const {
  for (const auto& p : params) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

bool is_valid_tool_name(std::string_view name) {
  if (name.empty()) return false;
  bool segment_start = true;
  for (char c : name) {
    if (c == '.') {
      if (segment_start) return false;
      segment_start = true;
      continue;
    }
    if (segment_start ? !ident_start(c) : !ident_char(c)) return false;
    segment_start = false;
  }
  return !segment_start;
}

std::vector<std::string> placeholders(std::string_view templ) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (std::size_t n = placeholder_at(templ, i); n > 0) {
      std::string name(templ.substr(i + 1, n - 2));
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
      i += n - 1;
    }
  }
  return out;
}

std::string substitute(std::string_view templ, const std::map<std::string, Scalar>& bound) {
  std::string out;
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (std::size_t n = placeholder_at(templ, i); n > 0) {
      auto it = bound.find(std::string(templ.substr(i + 1, n - 2)));
      if (it != bound.end()) out += scalar_text(it->second);
      i += n - 1;
    } else {
      out.push_back(templ[i]);
    }
  }
  return out;
}

void check_spec(const ToolSpec& spec) {
  if (!is_valid_tool_name(spec.name)) throw RegistryError("bad_name", "'" + spec.name + "'");
  std::set<std::string> declared;
  for (const auto& p : spec.params) {
    if (p.name.empty() || !ident_start(p.name[0]) ||
        !std::all_of(p.name.begin(), p.name.end(), ident_char)) {
      throw RegistryError("bad_name", spec.name + ": param '" + p.name + "'");
    }
    if (!declared.insert(p.name).second) {
      throw RegistryError("duplicate_name", spec.name + ": param '" + p.name + "' declared twice");
    }
  }
  if (spec.body.empty()) throw RegistryError("empty_body", spec.name);
  auto check_template = [&](std::string_view templ) {
    for (const auto& name : placeholders(templ)) {
      if (declared.count(name) == 0) {
        throw RegistryError("undeclared_param", spec.name + ": {" + name + "} is not a parameter");
      }
    }
  };
  for (const auto& op : spec.body) {
    if (const auto* p = std::get_if<PointerOp>(&op)) {
      throw RegistryError("grounding_forbidden", spec.name + ": body contains a " + p->kind + " action");
    }
    if (const auto* k = std::get_if<KeyOp>(&op)) {
      if (world::normalize_combo(k->combo).empty()) throw RegistryError("bad_body", spec.name + ": empty key");
    }
    if (const auto* t = std::get_if<TypeOp>(&op)) check_template(t->text);
    if (const auto* s = std::get_if<StateOp>(&op)) {
      if (s->address.size() != address_arity(s->target)) {
        throw RegistryError("bad_body", spec.name + ": " + std::string(target_name(s->target)) + " takes " +
                                            std::to_string(address_arity(s->target)) + " address part(s)");
      }
      for (const auto& a : s->address) check_template(a);
      check_template(s->value);
    }
  }
}

// ---------------------------------------------------------------------------
// JSON

json spec_to_json(const ToolSpec& spec) {
  json params = json::array();
  for (const auto& p : spec.params) {
    params.push_back({{"name", p.name},
                      {"type", scalar_type_name(p.type)},
                      {"required", p.required},
                      {"doc", p.doc}});
  }
  json body = json::array();
  for (const auto& op : spec.body) {
    std::visit(
        [&body](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, KeyOp>) {
            body.push_back({{"op", "key"}, {"combo", o.combo}});
          } else if constexpr (std::is_same_v<T, TypeOp>) {
            body.push_back({{"op", "type"}, {"text", o.text}});
          } else if constexpr (std::is_same_v<T, StateOp>) {
            body.push_back({{"op", "state"}, {"target", target_name(o.target)}, {"address", o.address},
                            {"value", o.value}});
          } else {
            body.push_back({{"op", o.kind}, {"x", o.x}, {"y", o.y}, {"dy", o.dy}});
          }
        },
        op);
  }
  return json{{"name", spec.name},
              {"doc", spec.doc},
              {"params", params},
              {"body", body},
              {"source", source_name(spec.source)},
              {"domain", world::app_name(spec.domain)}};
}

ToolSpec spec_from_json(const json& doc) {
  auto fail = [](const std::string& what) { return RegistryError("bad_spec", what); };
  if (!doc.is_object()) throw fail("tool spec must be an object");
  ToolSpec spec;
  try {
    spec.name = doc.at("name").get<std::string>();
    spec.doc = doc.value("doc", std::string{});
    auto source = source_from_name(doc.at("source").get<std::string>());
    if (!source) throw fail(spec.name + ": unknown source");
    spec.source = *source;
    auto domain = world::app_from_name(doc.at("domain").get<std::string>());
    if (!domain) throw fail(spec.name + ": unknown domain");
    spec.domain = *domain;
    for (const auto& p : doc.value("params", json::array())) {
      ToolParam param;
      param.name = p.at("name").get<std::string>();
      auto type = scalar_type_from_name(p.at("type").get<std::string>());
      if (!type) throw fail(spec.name + ": unknown param type");
      param.type = *type;
      param.required = p.value("required", true);
      param.doc = p.value("doc", std::string{});
      spec.params.push_back(std::move(param));
    }
    for (const auto& o : doc.at("body")) {
      const std::string op = o.at("op").get<std::string>();
      if (op == "key") {
        spec.body.push_back(KeyOp{o.at("combo").get<std::string>()});
      } else if (op == "type") {
        spec.body.push_back(TypeOp{o.at("text").get<std::string>()});
      } else if (op == "state") {
        auto target = target_from_name(o.at("target").get<std::string>());
        if (!target) throw fail(spec.name + ": unknown state target");
        spec.body.push_back(StateOp{*target, o.value("address", std::vector<std::string>{}),
                                    o.value("value", std::string{})});
      } else if (op == "click" || op == "double_click" || op == "scroll") {
        spec.body.push_back(PointerOp{op, o.value("x", 0), o.value("y", 0), o.value("dy", 0)});
      } else {
        throw fail(spec.name + ": unknown body op '" + op + "'");
      }
    }
  } catch (const json::exception& e) {
    throw fail(std::string("malformed tool spec: ") + e.what());
  }
  return spec;
}

std::string signature(const ToolSpec& spec) {
  std::string out = spec.name + "(";
  for (std::size_t i = 0; i < spec.params.size(); ++i) {
    const auto& p = spec.params[i];
    if (i > 0) out += ", ";
    out += p.name + ": ";
    switch (p.type) {
      case ScalarType::boolean: out += "bool"; break;
      case ScalarType::integer: out += "int"; break;
      case ScalarType::floating: out += "float"; break;
      case ScalarType::string: out += "str"; break;
    }
    if (!p.required) out += " = None";
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Registry

void ToolRegistry::add(ToolSpec spec) {
  check_spec(spec);
  if (tools_.count(spec.name) != 0) throw RegistryError("duplicate_name", spec.name);
  auto& names = by_domain_[spec.domain];
  names.insert(std::upper_bound(names.begin(), names.end(), spec.name), spec.name);
  std::string name = spec.name;
  tools_.emplace(std::move(name), std::move(spec));
}

const ToolSpec* ToolRegistry::find(std::string_view name) const {
  auto it = tools_.find(name);
  return it == tools_.end() ? nullptr : &it->second;
}

const std::vector<std::string>& ToolRegistry::by_domain(world::App domain) const {
  static const std::vector<std::string> kEmpty;
  auto it = by_domain_.find(domain);
  return it == by_domain_.end() ? kEmpty : it->second;
}

ToolRegistry register_tool(ToolRegistry registry, ToolSpec spec) {
  registry.add(std::move(spec));
  return registry;
}

json registry_to_json(const ToolRegistry& registry) {
  json out = json::array();
  for (const auto& [name, spec] : registry.tools()) out.push_back(spec_to_json(spec));
  return out;
}

ToolRegistry registry_from_json(const json& doc) {
  if (!doc.is_array()) throw RegistryError("bad_spec", "tool catalog must be a JSON array");
  ToolRegistry r;
  for (const auto& item : doc) r.add(spec_from_json(item));
  return r;
}

std::vector<const ToolSpec*> expose(const ToolRegistry& registry, world::App domain, std::size_t cap) {
  std::vector<const ToolSpec*> out;
  auto take = [&](world::App app) {
    for (const auto& name : registry.by_domain(app)) {
      if (out.size() >= cap) return;
      out.push_back(registry.find(name));
    }
  };
  take(domain);
  if (domain != world::App::files) take(world::App::files);
  return out;
}

}  // namespace hcua::toolforge
