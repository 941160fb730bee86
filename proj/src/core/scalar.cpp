#include "hcua/core/scalar.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace hcua {

ScalarType scalar_type(const Scalar& value) {
  return static_cast<ScalarType>(value.index());
}

std::string_view scalar_type_name(ScalarType type) {
  switch (type) {
    case ScalarType::boolean: return "bool";
    case ScalarType::integer: return "int";
    case ScalarType::floating: return "float";
    case ScalarType::string: return "string";
  }
  return "string";
}

std::optional<ScalarType> scalar_type_from_name(std::string_view name) {
  if (name == "bool") return ScalarType::boolean;
  if (name == "int") return ScalarType::integer;
  if (name == "float") return ScalarType::floating;
  if (name == "string") return ScalarType::string;
  return std::nullopt;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, end);
}

std::string scalar_text(const Scalar& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return v;
        }
      },
      value);
}

Scalar parse_cell_text(std::string_view text) {
  if (text.empty()) return std::string{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(first, last, i); ec == std::errc{} && p == last) {
    return i;
  }
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(first, last, d, std::chars_format::fixed);
      ec == std::errc{} && p == last && std::isfinite(d)) {
    return d;
  }
  return std::string(text);
}

bool scalar_text_equal(const Scalar& a, const Scalar& b) {
  return scalar_text(a) == scalar_text(b);
}

nlohmann::json scalar_to_json(const Scalar& value) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, value);
}

Scalar scalar_from_json(const nlohmann::json& value) {
  if (value.is_boolean()) return value.get<bool>();
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) return value.get<double>();
  if (value.is_string()) return value.get<std::string>();
  throw std::invalid_argument("expected a scalar (string, number or bool), got " +
                              std::string(value.type_name()));
}

}  // namespace hcua
