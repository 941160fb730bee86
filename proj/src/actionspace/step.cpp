#include <charconv>
#include <cmath>

#include "hcua/actionspace/action.hpp"
#include "hcua/core/errors.hpp"

namespace hcua::actionspace {

namespace {

constexpr std::string_view kOpen = "<memory>";
constexpr std::string_view kClose = "</memory>";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ParsedStep parse() {
    ParsedStep step;
    step.raw = std::string(s_);
    skip_ws();
    if (s_.substr(pos_, kOpen.size()) == kOpen) {
      const std::size_t start = pos_ + kOpen.size();
      const std::size_t end = s_.find(kClose, start);
      if (end == std::string_view::npos) throw ParseError(pos_, "unterminated <memory> block");
      step.memory = unescape_memory(s_.substr(start, end - start));
      pos_ = end + kClose.size();
      skip_ws();
    }
    if (pos_ >= s_.size()) throw ParseError(pos_, "expected an action");
    step.action = call();
    skip_ws();
    if (pos_ < s_.size()) {
      throw ParseError(pos_, "unexpected input after the action; a step holds exactly one action");
    }
    return step;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) throw ParseError(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string name() {
    skip_ws();
    const std::size_t start = pos_;
    bool segment_start = true;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '.' && !segment_start) {
        segment_start = true;
      } else if (segment_start ? ident_start(c) : ident_char(c)) {
        segment_start = false;
      } else {
        break;
      }
      ++pos_;
    }
    if (pos_ == start || segment_start) throw ParseError(pos_, "expected an action name");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) throw ParseError(pos_, "expected an argument name");
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Scalar scalar() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, "expected a value");
    const std::size_t start = pos_;
    const char c = s_[pos_];
    if (c == '"') {
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') pos_ += (s_[pos_] == '\\') ? 2 : 1;
      if (pos_ >= s_.size()) throw ParseError(start, "unterminated string");
      ++pos_;
      try {
        return nlohmann::json::parse(s_.substr(start, pos_ - start)).get<std::string>();
      } catch (const nlohmann::json::exception&) {
        throw ParseError(start, "malformed string literal");
      }
    }
    if (s_.substr(pos_, 4) == "true" && !continues_word(pos_ + 4)) {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false" && !continues_word(pos_ + 5)) {
      pos_ += 5;
      return false;
    }
    if (c == '-' || (c >= '0' && c <= '9')) return number();
    throw ParseError(pos_, "expected a string, number, true or false");
  }

  bool continues_word(std::size_t at) const { return at < s_.size() && ident_char(s_[at]); }

  Scalar number() {
    const std::size_t start = pos_;
    if (s_[pos_] == '-') ++pos_;
    bool is_float = false;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c >= '0' && c <= '9') {
        ++pos_;
      } else if (c == '.' || c == 'e' || c == 'E') {
        is_float = true;
        ++pos_;
      } else if ((c == '+' || c == '-') && (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E')) {
        ++pos_;
      } else {
        break;
      }
    }
    const std::string_view text = s_.substr(start, pos_ - start);
    // JSON number syntax: no leading zeros, digits around the point.
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
      throw ParseError(start, "malformed number '" + std::string(text) + "'");
    }
    if (!is_float) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || p != text.data() + text.size()) {
        throw ParseError(start, "integer out of range '" + std::string(text) + "'");
      }
      return v;
    }
    const double d = parsed.get<double>();
    if (!std::isfinite(d)) throw ParseError(start, "number out of range");
    return d;
  }

  Action call() {
    const std::size_t start = pos_;
    const std::string n = name();
    expect('(');
    std::map<std::string, Scalar> args;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ')') {
      ++pos_;
    } else {
      while (true) {
        skip_ws();
        const std::size_t arg_pos = pos_;
        std::string key = ident();
        expect('=');
        Scalar value = scalar();
        if (!args.emplace(key, std::move(value)).second) {
          throw ParseError(arg_pos, "duplicate argument '" + key + "'");
        }
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    return build(start, n, args);
  }

  template <typename T>
  T take(std::size_t at, const std::string& action, std::map<std::string, Scalar>& args, const std::string& key) {
    auto it = args.find(key);
    if (it == args.end()) throw ParseError(at, action + " requires argument '" + key + "'");
    const T* v = std::get_if<T>(&it->second);
    if (v == nullptr) throw ParseError(at, action + ": argument '" + key + "' has the wrong type");
    T out = *v;
    args.erase(it);
    return out;
  }

  static int to_int(std::size_t at, std::int64_t v) {
    if (v < INT32_MIN || v > INT32_MAX) throw ParseError(at, "coordinate out of range");
    return static_cast<int>(v);
  }

  Action build(std::size_t at, const std::string& n, std::map<std::string, Scalar> args) {
    Action out;
    if (n == "click" || n == "double_click") {
      const int x = to_int(at, take<std::int64_t>(at, n, args, "x"));
      const int y = to_int(at, take<std::int64_t>(at, n, args, "y"));
      out = n == "click" ? Action{world::Click{x, y}} : Action{world::DoubleClick{x, y}};
    } else if (n == "type") {
      out = world::TypeText{take<std::string>(at, n, args, "text")};
    } else if (n == "key") {
      out = world::KeyPress{take<std::string>(at, n, args, "combo")};
    } else if (n == "scroll") {
      out = world::Scroll{to_int(at, take<std::int64_t>(at, n, args, "dy"))};
    } else if (n == "done") {
      out = Done{take<bool>(at, n, args, "success")};
    } else {
      return ToolCall{n, std::move(args)};
    }
    if (!args.empty()) throw ParseError(at, n + ": unexpected argument '" + args.begin()->first + "'");
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string scalar_literal(const Scalar& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          std::string text = format_double(x);
          if (text.find_first_of(".en") == std::string::npos) text += ".0";
          return text;
        } else {
          return nlohmann::json(x).dump();
        }
      },
      v);
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

bool is_tool_call(const Action& a) { return std::holds_alternative<ToolCall>(a); }

bool is_grounding_free(const Action& a) {
  return std::holds_alternative<world::KeyPress>(a) || std::holds_alternative<world::TypeText>(a) ||
         std::holds_alternative<ToolCall>(a) || std::holds_alternative<Done>(a);
}

std::string escape_memory(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\') {
      out += "\\\\";
    } else if (text.substr(i, kClose.size()) == kClose) {
      out += "<\\/memory>";
      i += kClose.size() - 1;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

std::string unescape_memory(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size() && (text[i + 1] == '\\' || text[i + 1] == '/')) {
      out.push_back(text[i + 1]);
      ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

ParsedStep parse_step(std::string_view text) { return Parser(text).parse(); }

std::string serialize_action(const Action& action) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, world::Click>) {
          return "click(x=" + std::to_string(a.x) + ", y=" + std::to_string(a.y) + ")";
        } else if constexpr (std::is_same_v<T, world::DoubleClick>) {
          return "double_click(x=" + std::to_string(a.x) + ", y=" + std::to_string(a.y) + ")";
        } else if constexpr (std::is_same_v<T, world::TypeText>) {
          return "type(text=" + quoted(a.text) + ")";
        } else if constexpr (std::is_same_v<T, world::KeyPress>) {
          return "key(combo=" + quoted(a.combo) + ")";
        } else if constexpr (std::is_same_v<T, world::Scroll>) {
          return "scroll(dy=" + std::to_string(a.dy) + ")";
        } else if constexpr (std::is_same_v<T, Done>) {
          return std::string("done(success=") + (a.claims_success ? "true" : "false") + ")";
        } else {
          std::string out = a.name + "(";
          bool first = true;
          for (const auto& [k, v] : a.args) {
            if (!first) out += ", ";
            first = false;
            out += k + "=" + scalar_literal(v);
          }
          return out + ")";
        }
      },
      action);
}

std::string serialize_step(const ParsedStep& step) {
  std::string out;
  if (step.memory) out += std::string(kOpen) + escape_memory(*step.memory) + std::string(kClose) + "\n";
  return out + serialize_action(step.action);
}

}  // namespace hcua::actionspace
