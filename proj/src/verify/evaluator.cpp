#include "hcua/verify/evaluator.hpp"

#include <algorithm>

#include "hcua/core/errors.hpp"

namespace hcua::verify {

using nlohmann::json;

namespace {

struct KindInfo {
  AtomicKind kind;
  std::string_view name;
  std::vector<ParamSpec> params;
};

const std::vector<KindInfo>& kind_table() {
  static const std::vector<KindInfo> table = {
      {AtomicKind::file_exists, "file_exists",
       {{"path", ScalarType::string, "absolute path of a file or directory"}}},
      {AtomicKind::file_content_equals, "file_content_equals",
       {{"path", ScalarType::string, "absolute path of a file"},
        {"content", ScalarType::string, "expected text, compared after stripping trailing newlines"}}},
      {AtomicKind::url_equals, "url_equals", {{"url", ScalarType::string, "expected current browser URL"}}},
      {AtomicKind::setting_equals, "setting_equals",
       {{"app", ScalarType::string, "settings namespace"},
        {"key", ScalarType::string, "setting key"},
        {"value", ScalarType::string, "expected value"}}},
      {AtomicKind::cell_value_equals, "cell_value_equals",
       {{"cell", ScalarType::string, "cell reference such as B3"},
        {"value", std::nullopt, "expected value, compared by display text"}}},
      {AtomicKind::clipboard_equals, "clipboard_equals", {{"text", ScalarType::string, "expected clipboard text"}}},
      {AtomicKind::bookmark_exists, "bookmark_exists",
       {{"name", ScalarType::string, "bookmark or bookmark-folder name"},
        {"folder", ScalarType::string, "containing folder, e.g. Bookmarks bar"}}},
  };
  return table;
}

const KindInfo& info(AtomicKind kind) {
  for (const auto& k : kind_table()) {
    if (k.kind == kind) return k;
  }
  throw EvaluatorError("unknown evaluator kind");
}

const std::string& str(const AtomicEvaluator& e, const std::string& key) {
  return std::get<std::string>(e.params.at(key));
}

std::string_view strip_trailing_newlines(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view kind_name(AtomicKind kind) { return info(kind).name; }

std::optional<AtomicKind> kind_from_name(std::string_view name) {
  for (const auto& k : kind_table()) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

const std::vector<ParamSpec>& required_params(AtomicKind kind) { return info(kind).params; }

void validate(const AtomicEvaluator& e) {
  const auto& specs = required_params(e.kind);
  const std::string where = std::string(kind_name(e.kind));
  if (e.params.size() != specs.size()) {
    throw EvaluatorError(where + ": expected " + std::to_string(specs.size()) + " params, got " +
                         std::to_string(e.params.size()));
  }
  for (const auto& spec : specs) {
    auto it = e.params.find(spec.name);
    if (it == e.params.end()) throw EvaluatorError(where + ": missing param '" + spec.name + "'");
    if (spec.type && scalar_type(it->second) != *spec.type) {
      throw EvaluatorError(where + ": param '" + spec.name + "' must be " +
                           std::string(scalar_type_name(*spec.type)));
    }
  }
  if (e.kind == AtomicKind::file_exists || e.kind == AtomicKind::file_content_equals) {
    if (!world::is_normalized_path(str(e, "path"))) {
      throw EvaluatorError(where + ": path '" + str(e, "path") + "' is not absolute and normalized");
    }
  }
  if (e.kind == AtomicKind::cell_value_equals && !world::is_cell_ref(str(e, "cell"))) {
    throw EvaluatorError(where + ": '" + str(e, "cell") + "' is not a cell reference");
  }
  if (e.kind == AtomicKind::setting_equals && (str(e, "app").empty() || str(e, "key").empty())) {
    throw EvaluatorError(where + ": empty setting address");
  }
}

AtomicEvaluator make_atomic(AtomicKind kind, std::map<std::string, Scalar> params) {
  AtomicEvaluator e{kind, std::move(params)};
  validate(e);
  return e;
}

AtomicEvaluator file_exists(std::string path) {
  return make_atomic(AtomicKind::file_exists, {{"path", std::move(path)}});
}
AtomicEvaluator file_content_equals(std::string path, std::string content) {
  return make_atomic(AtomicKind::file_content_equals, {{"path", std::move(path)}, {"content", std::move(content)}});
}
AtomicEvaluator url_equals(std::string url) { return make_atomic(AtomicKind::url_equals, {{"url", std::move(url)}}); }
AtomicEvaluator setting_equals(std::string app, std::string key, std::string value) {
  return make_atomic(AtomicKind::setting_equals,
                     {{"app", std::move(app)}, {"key", std::move(key)}, {"value", std::move(value)}});
}
AtomicEvaluator cell_value_equals(std::string cell, Scalar value) {
  return make_atomic(AtomicKind::cell_value_equals, {{"cell", std::move(cell)}, {"value", std::move(value)}});
}
AtomicEvaluator clipboard_equals(std::string text) {
  return make_atomic(AtomicKind::clipboard_equals, {{"text", std::move(text)}});
}
AtomicEvaluator bookmark_exists(std::string name, std::string folder) {
  return make_atomic(AtomicKind::bookmark_exists, {{"name", std::move(name)}, {"folder", std::move(folder)}});
}

EvaluatorConfig EvaluatorConfig::leaf(AtomicEvaluator e) {
  EvaluatorConfig c;
  c.node = Node::atomic;
  c.atomic = std::move(e);
  return c;
}

EvaluatorConfig EvaluatorConfig::all_of(std::vector<EvaluatorConfig> children) {
  EvaluatorConfig c;
  c.node = Node::all;
  c.children = std::move(children);
  return c;
}

EvaluatorConfig EvaluatorConfig::any_of(std::vector<EvaluatorConfig> children) {
  EvaluatorConfig c;
  c.node = Node::any;
  c.children = std::move(children);
  return c;
}

std::size_t depth(const EvaluatorConfig& cfg) {
  if (cfg.node == EvaluatorConfig::Node::atomic) return 1;
  std::size_t d = 0;
  for (const auto& c : cfg.children) d = std::max(d, depth(c));
  return d + 1;
}

std::vector<AtomicEvaluator> leaves(const EvaluatorConfig& cfg) {
  if (cfg.node == EvaluatorConfig::Node::atomic) return {cfg.atomic};
  std::vector<AtomicEvaluator> out;
  for (const auto& c : cfg.children) {
    auto sub = leaves(c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

void validate(const EvaluatorConfig& cfg) {
  if (depth(cfg) > kMaxDepth) throw EvaluatorError("evaluator tree deeper than " + std::to_string(kMaxDepth));
  if (cfg.node == EvaluatorConfig::Node::atomic) {
    validate(cfg.atomic);
    return;
  }
  if (cfg.children.empty()) throw EvaluatorError("combinator node without children");
  for (const auto& c : cfg.children) validate(c);
}

bool check_atomic(const world::WorldState& state, const AtomicEvaluator& e) {
  using world::StateSelector;
  try {
    switch (e.kind) {
      case AtomicKind::file_exists: {
        auto v = world::query(state, StateSelector::file_exists(str(e, "path")));
        return v && *v == Scalar{true};
      }
      case AtomicKind::file_content_equals: {
        auto v = world::query(state, StateSelector::file_content(str(e, "path")));
        return v && strip_trailing_newlines(std::get<std::string>(*v)) ==
                        strip_trailing_newlines(str(e, "content"));
      }
      case AtomicKind::url_equals: {
        auto v = world::query(state, StateSelector::url());
        return v && std::get<std::string>(*v) == str(e, "url");
      }
      case AtomicKind::setting_equals: {
        auto v = world::query(state, StateSelector::setting(str(e, "app"), str(e, "key")));
        return v && std::get<std::string>(*v) == str(e, "value");
      }
      case AtomicKind::cell_value_equals: {
        auto v = world::query(state, StateSelector::cell(str(e, "cell")));
        return v && scalar_text_equal(*v, e.params.at("value"));
      }
      case AtomicKind::clipboard_equals: {
        auto v = world::query(state, StateSelector::clipboard());
        return v && std::get<std::string>(*v) == str(e, "text");
      }
      case AtomicKind::bookmark_exists: {
        auto v = world::query(state, StateSelector::bookmark(str(e, "name"), str(e, "folder")));
        return v && *v == Scalar{true};
      }
    }
  } catch (const SelectorError&) {
    return false;
  } catch (const std::out_of_range&) {
    return false;
  } catch (const std::bad_variant_access&) {
    return false;
  }
  return false;
}

AtomicEvaluator reprogram(const AtomicEvaluator& e, const std::map<std::string, Scalar>& substitutions) {
  AtomicEvaluator out = e;
  for (const auto& [key, value] : substitutions) {
    auto it = out.params.find(key);
    if (it == out.params.end()) {
      throw SubstitutionError(std::string(kind_name(e.kind)) + " has no param '" + key + "'");
    }
    it->second = value;
  }
  validate(out);
  return out;
}

EvaluatorConfig compose(const std::vector<AtomicEvaluator>& atoms, Combinator combinator) {
  if (atoms.empty()) throw EvaluatorError("compose needs at least one leaf");
  std::vector<EvaluatorConfig> children;
  children.reserve(atoms.size());
  for (const auto& a : atoms) {
    validate(a);
    children.push_back(EvaluatorConfig::leaf(a));
  }
  return combinator == Combinator::all ? EvaluatorConfig::all_of(std::move(children))
                                       : EvaluatorConfig::any_of(std::move(children));
}

bool evaluate(const world::WorldState& state, const EvaluatorConfig& cfg) {
  switch (cfg.node) {
    case EvaluatorConfig::Node::atomic: return check_atomic(state, cfg.atomic);
    case EvaluatorConfig::Node::all:
      for (const auto& c : cfg.children) {
        if (!evaluate(state, c)) return false;
      }
      return true;
    case EvaluatorConfig::Node::any:
      for (const auto& c : cfg.children) {
        if (evaluate(state, c)) return true;
      }
      return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// JSON

json atomic_to_json(const AtomicEvaluator& e) {
  json params = json::object();
  for (const auto& [k, v] : e.params) params[k] = scalar_to_json(v);
  return json{{"kind", kind_name(e.kind)}, {"params", params}};
}

AtomicEvaluator atomic_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw EvaluatorError("leaf needs a string 'kind'");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "kind" && key != "params") throw EvaluatorError("unexpected leaf key '" + key + "'");
  }
  auto kind = kind_from_name(doc["kind"].get<std::string>());
  if (!kind) throw EvaluatorError("unknown evaluator kind '" + doc["kind"].get<std::string>() + "'");
  AtomicEvaluator e;
  e.kind = *kind;
  const json params = doc.value("params", json::object());
  if (!params.is_object()) throw EvaluatorError("'params' must be an object");
  for (const auto& [k, v] : params.items()) {
    try {
      e.params[k] = scalar_from_json(v);
    } catch (const std::invalid_argument& err) {
      throw EvaluatorError("param '" + k + "': " + err.what());
    }
  }
  validate(e);
  return e;
}

json config_to_json(const EvaluatorConfig& cfg) {
  if (cfg.node == EvaluatorConfig::Node::atomic) return atomic_to_json(cfg.atomic);
  json children = json::array();
  for (const auto& c : cfg.children) children.push_back(config_to_json(c));
  return json{{cfg.node == EvaluatorConfig::Node::all ? "all" : "any", children}};
}

namespace {

EvaluatorConfig config_from_json_at(const json& doc, std::size_t level) {
  if (level > kMaxDepth) throw EvaluatorError("evaluator tree deeper than " + std::to_string(kMaxDepth));
  if (doc.is_object() && doc.size() == 1 && (doc.contains("all") || doc.contains("any"))) {
    const bool all = doc.contains("all");
    const json& arr = all ? doc["all"] : doc["any"];
    if (!arr.is_array() || arr.empty()) throw EvaluatorError("combinator needs a non-empty array");
    std::vector<EvaluatorConfig> children;
    for (const auto& c : arr) children.push_back(config_from_json_at(c, level + 1));
    return all ? EvaluatorConfig::all_of(std::move(children)) : EvaluatorConfig::any_of(std::move(children));
  }
  return EvaluatorConfig::leaf(atomic_from_json(doc));
}

}  // namespace

EvaluatorConfig config_from_json(const json& doc) { return config_from_json_at(doc, 1); }

std::vector<AtomicEvaluator> atomic_library() {
  return {
      file_exists("/home/user/Documents/tutorial.pdf"),
      file_content_equals("/home/user/notes.txt", "hello"),
      url_equals("https://docs.python.org"),
      setting_equals("editor", "theme", "Dark+"),
      cell_value_equals("A2", std::string("hello")),
      clipboard_equals("copied text"),
      bookmark_exists("Favorites", std::string(world::kDefaultBookmarkFolder)),
  };
}

json atomic_library_manifest() {
  json kinds = json::array();
  for (const auto& k : kind_table()) {
    json params = json::array();
    for (const auto& p : k.params) {
      params.push_back({{"name", p.name},
                        {"type", p.type ? std::string(scalar_type_name(*p.type)) : std::string("any")},
                        {"doc", p.doc}});
    }
    kinds.push_back({{"kind", k.name}, {"params", params}});
  }
  return json{{"kinds", kinds}, {"max_depth", kMaxDepth}, {"combinators", {"all", "any"}}};
}

}  // namespace hcua::verify
