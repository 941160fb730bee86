#include <cctype>
#include <span>

#include "hcua/tasksynth/synth.hpp"

namespace hcua::tasksynth {

namespace {

using verify::AtomicEvaluator;
using verify::AtomicKind;
using verify::EvaluatorConfig;
using nlohmann::json;

constexpr std::string_view kBar = world::kDefaultBookmarkFolder;

std::string q(const std::string& s) { return json(s).dump(); }

const std::string& str(const AtomicEvaluator& a, const char* key) { return std::get<std::string>(a.params.at(key)); }

std::string phrase_leaf(const AtomicEvaluator& a) {
  switch (a.kind) {
    case AtomicKind::file_exists: {
      const std::string& path = str(a, "path");
      const bool has_ext = world::base_name(path).find('.') != std::string::npos;
      return (has_ext ? "create the file " : "create the folder ") + q(path);
    }
    case AtomicKind::file_content_equals:
      return "replace the contents of " + q(str(a, "path")) + " with " + q(str(a, "content"));
    case AtomicKind::url_equals:
      return "open " + q(str(a, "url")) + " in the browser";
    case AtomicKind::setting_equals: {
      const std::string& app = str(a, "app");
      const std::string& key = str(a, "key");
      const std::string& value = str(a, "value");
      if (app == "editor" && key == "theme") return "set the editor color theme to " + q(value);
      if (app == "keybindings") return "bind the key " + q(key) + " to the command " + q(value);
      return "change the setting " + q(app + "." + key) + " to " + q(value);
    }
    case AtomicKind::cell_value_equals:
      return "enter " + scalar_to_json(a.params.at("value")).dump() + " into cell " + str(a, "cell");
    case AtomicKind::clipboard_equals: {
      const std::string& text = str(a, "text");
      if (!text.empty() && text[0] == '/' && world::is_normalized_path(text)) {
        return "copy the path of " + q(text) + " to the clipboard";
      }
      return "copy the text " + q(text) + " to the clipboard";
    }
    case AtomicKind::bookmark_exists: {
      const std::string& name = str(a, "name");
      const std::string& folder = str(a, "folder");
      if (folder == kBar) return "create the folder " + q(name) + " on the bookmarks bar";
      return "add a bookmark named " + q(name) + " to the folder " + q(folder);
    }
  }
  return {};
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

bool is_pdf_pair(const std::vector<AtomicEvaluator>& leaves) {
  if (leaves.size() != 2) return false;
  if (leaves[0].kind != AtomicKind::url_equals || leaves[1].kind != AtomicKind::file_exists) return false;
  const std::string& path = str(leaves[1], "path");
  return path.size() > 4 && path.compare(path.size() - 4, 4, ".pdf") == 0;
}

// ---------------------------------------------------------------------------
// Parsing: each leaf pattern is a sequence of literal text and typed slots.

enum class Slot { quoted, value, ref };
using Piece = std::variant<std::string_view, Slot>;
using Captures = std::vector<std::string>;  // quoted slots decoded, others raw

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;
};

std::optional<std::string> read_quoted(Cursor& c) {
  if (c.pos >= c.s.size() || c.s[c.pos] != '"') return std::nullopt;
  std::size_t end = c.pos + 1;
  while (end < c.s.size() && c.s[end] != '"') end += c.s[end] == '\\' ? 2 : 1;
  if (end >= c.s.size()) return std::nullopt;
  try {
    std::string out = json::parse(c.s.substr(c.pos, end + 1 - c.pos)).get<std::string>();
    c.pos = end + 1;
    return out;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::optional<Captures> match(const std::vector<Piece>& pattern, Cursor& c) {
  Captures caps;
  Cursor at = c;
  for (const auto& piece : pattern) {
    if (const auto* lit = std::get_if<std::string_view>(&piece)) {
      if (at.s.substr(at.pos, lit->size()) != *lit) return std::nullopt;
      at.pos += lit->size();
      continue;
    }
    switch (std::get<Slot>(piece)) {
      case Slot::quoted: {
        auto v = read_quoted(at);
        if (!v) return std::nullopt;
        caps.push_back(std::move(*v));
        break;
      }
      case Slot::value: {
        const std::size_t start = at.pos;
        if (at.pos < at.s.size() && at.s[at.pos] == '"') {
          if (!read_quoted(at)) return std::nullopt;
        } else {
          while (at.pos < at.s.size() && at.s[at.pos] != ' ') ++at.pos;
        }
        if (at.pos == start) return std::nullopt;
        caps.emplace_back(at.s.substr(start, at.pos - start));
        break;
      }
      case Slot::ref: {
        const std::size_t start = at.pos;
        while (at.pos < at.s.size() && std::isalnum(static_cast<unsigned char>(at.s[at.pos]))) ++at.pos;
        const std::string ref(at.s.substr(start, at.pos - start));
        if (!world::is_cell_ref(ref)) return std::nullopt;
        caps.push_back(ref);
        break;
      }
    }
  }
  c = at;
  return caps;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return dir == "/" ? "/" + name : dir + "/" + name;
}

using Builder = std::optional<std::vector<AtomicEvaluator>> (*)(const Captures&);

struct LeafRule {
  std::vector<Piece> pattern;
  Builder build;
};

std::optional<std::vector<AtomicEvaluator>> one(AtomicEvaluator a) {
  try {
    verify::validate(a);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return std::vector<AtomicEvaluator>{std::move(a)};
}

const std::vector<LeafRule>& leaf_rules() {
  using S = Slot;
  static const std::vector<LeafRule> rules = {
      {{"create the folder ", S::quoted, " on the bookmarks bar"},
       [](const Captures& c) { return one(verify::bookmark_exists(c[0], std::string(kBar))); }},
      {{"create the file ", S::quoted}, [](const Captures& c) { return one(verify::file_exists(c[0])); }},
      {{"create the folder ", S::quoted}, [](const Captures& c) { return one(verify::file_exists(c[0])); }},
      {{"create a new folder named ", S::quoted, " in ", S::quoted},
       [](const Captures& c) { return one(verify::file_exists(join_path(c[1], c[0]))); }},
      {{"create a new spreadsheet named ", S::quoted, " in ", S::quoted},
       [](const Captures& c) { return one(verify::file_exists(join_path(c[1], c[0]))); }},
      {{"replace the contents of ", S::quoted, " with ", S::quoted},
       [](const Captures& c) { return one(verify::file_content_equals(c[0], c[1])); }},
      {{"open ", S::quoted, " in the browser"}, [](const Captures& c) { return one(verify::url_equals(c[0])); }},
      {{"set the editor color theme to ", S::quoted},
       [](const Captures& c) { return one(verify::setting_equals("editor", "theme", c[0])); }},
      {{"bind the key ", S::quoted, " to the command ", S::quoted},
       [](const Captures& c) { return one(verify::setting_equals("keybindings", c[0], c[1])); }},
      {{"change the setting ", S::quoted, " to ", S::quoted},
       [](const Captures& c) -> std::optional<std::vector<AtomicEvaluator>> {
         const std::size_t dot = c[0].find('.');
         if (dot == std::string::npos) return std::nullopt;
         return one(verify::setting_equals(c[0].substr(0, dot), c[0].substr(dot + 1), c[1]));
       }},
      {{"enter ", S::value, " into cell ", S::ref},
       [](const Captures& c) -> std::optional<std::vector<AtomicEvaluator>> {
         try {
           return one(verify::cell_value_equals(c[1], scalar_from_json(json::parse(c[0]))));
         } catch (const std::exception&) {
           return std::nullopt;
         }
       }},
      {{"copy the path of ", S::quoted, " to the clipboard"},
       [](const Captures& c) { return one(verify::clipboard_equals(c[0])); }},
      {{"copy the text ", S::quoted, " to the clipboard"},
       [](const Captures& c) { return one(verify::clipboard_equals(c[0])); }},
      {{"add a bookmark named ", S::quoted, " to the folder ", S::quoted},
       [](const Captures& c) { return one(verify::bookmark_exists(c[0], c[1])); }},
  };
  return rules;
}

// Parses leaves joined by exactly the given separators and ending in ".",
// backtracking over the leaf rules.
bool parse_leaves(Cursor c, std::span<const std::string_view> seps, std::vector<AtomicEvaluator>& out) {
  for (const auto& rule : leaf_rules()) {
    Cursor at = c;
    auto caps = match(rule.pattern, at);
    if (!caps) continue;
    std::optional<std::vector<AtomicEvaluator>> built;
    try {
      built = rule.build(*caps);
    } catch (const std::exception&) {
      continue;
    }
    if (!built) continue;
    const std::size_t mark = out.size();
    out.insert(out.end(), built->begin(), built->end());
    if (seps.empty()) {
      if (at.s.substr(at.pos) == ".") return true;
    } else if (at.s.substr(at.pos, seps[0].size()) == seps[0]) {
      if (parse_leaves(Cursor{at.s, at.pos + seps[0].size()}, seps.subspan(1), out)) return true;
    }
    out.resize(mark);
  }
  return false;
}

}  // namespace

world::App leaf_domain(const AtomicEvaluator& a) {
  switch (a.kind) {
    case AtomicKind::file_exists:
    case AtomicKind::clipboard_equals:
      return world::App::files;
    case AtomicKind::file_content_equals:
      return world::App::editor;
    case AtomicKind::url_equals:
    case AtomicKind::bookmark_exists:
      return world::App::browser;
    case AtomicKind::cell_value_equals:
      return world::App::sheet;
    case AtomicKind::setting_equals: {
      const std::string& app = str(a, "app");
      return app == "editor" || app == "keybindings" ? world::App::editor : world::App::settings;
    }
  }
  return world::App::files;
}

std::optional<std::string> phrase_config(const EvaluatorConfig& cfg) {
  if (cfg.node == EvaluatorConfig::Node::atomic) return std::nullopt;
  if (cfg.children.empty() || cfg.children.size() > 3) return std::nullopt;
  std::vector<AtomicEvaluator> ls;
  for (const auto& c : cfg.children) {
    if (c.node != EvaluatorConfig::Node::atomic) return std::nullopt;
    ls.push_back(c.atomic);
  }
  if (cfg.node == EvaluatorConfig::Node::all) {
    if (is_pdf_pair(ls)) {
      return "Navigate to " + q(str(ls[0], "url")) + " and download the PDF to " + q(str(ls[1], "path")) + ".";
    }
    std::string out = phrase_leaf(ls[0]);
    for (std::size_t i = 1; i < ls.size(); ++i) {
      out += (i + 1 == ls.size() ? ", and " : ", ") + phrase_leaf(ls[i]);
    }
    return capitalize(out) + ".";
  }
  if (ls.size() < 2) return std::nullopt;
  std::string out = "Either " + phrase_leaf(ls[0]);
  for (std::size_t i = 1; i < ls.size(); ++i) out += ", or " + phrase_leaf(ls[i]);
  return out + ".";
}

std::optional<EvaluatorConfig> parse_instruction(std::string_view text) {
  std::string s(text);
  if (s.empty()) return std::nullopt;
  {
    Cursor c{s, 0};
    auto caps = match({std::string_view("Navigate to "), Slot::quoted, std::string_view(" and download the PDF to "),
                       Slot::quoted, std::string_view(".")},
                      c);
    if (caps && c.pos == s.size()) {
      try {
        return verify::compose({verify::url_equals((*caps)[0]), verify::file_exists((*caps)[1])},
                               verify::Combinator::all);
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
  }
  bool any = false;
  constexpr std::string_view kEither = "Either ";
  if (s.compare(0, kEither.size(), kEither) == 0) {
    any = true;
    s.erase(0, kEither.size());
  } else {
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  }
  static constexpr std::string_view kAll[][2] = {{}, {", and "}, {", ", ", and "}};
  static constexpr std::string_view kAny[][2] = {{", or "}, {", or ", ", or "}};
  for (std::size_t n = 0; n < (any ? 2 : 3); ++n) {
    const std::span<const std::string_view> seps(any ? kAny[n] : kAll[n], any ? n + 1 : n);
    std::vector<AtomicEvaluator> ls;
    if (parse_leaves(Cursor{s, 0}, seps, ls)) {
      return verify::compose(ls, any ? verify::Combinator::any : verify::Combinator::all);
    }
  }
  return std::nullopt;
}

}  // namespace hcua::tasksynth
