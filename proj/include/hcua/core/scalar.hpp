#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

namespace hcua {

/// A leaf value used by tool arguments, evaluator parameters and spreadsheet cells.
using Scalar = std::variant<bool, std::int64_t, double, std::string>;

enum class ScalarType { boolean, integer, floating, string };

ScalarType scalar_type(const Scalar& value);
std::string_view scalar_type_name(ScalarType type);
std::optional<ScalarType> scalar_type_from_name(std::string_view name);

/// Canonical display text: integers in decimal, doubles in shortest round-trip
/// form, booleans as true/false, strings verbatim.
std::string scalar_text(const Scalar& value);

/// Interprets free text the way a spreadsheet cell does: integer, then double,
/// otherwise the text itself.
Scalar parse_cell_text(std::string_view text);

/// Equality of canonical text, so 2 and 2.0 typed into a cell compare equal.
bool scalar_text_equal(const Scalar& a, const Scalar& b);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

nlohmann::json scalar_to_json(const Scalar& value);
/// Throws std::invalid_argument for arrays, objects and null.
Scalar scalar_from_json(const nlohmann::json& value);

}  // namespace hcua
