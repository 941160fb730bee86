#pragma once

// Atomic state checkers and their AllOf/AnyOf composition.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcua/core/scalar.hpp"
#include "hcua/world/world.hpp"

namespace hcua::verify {

enum class AtomicKind {
  file_exists,
  file_content_equals,
  url_equals,
  setting_equals,
  cell_value_equals,
  clipboard_equals,
  bookmark_exists,
};

inline constexpr std::array<AtomicKind, 7> kAllKinds = {
    AtomicKind::file_exists,      AtomicKind::file_content_equals, AtomicKind::url_equals,
    AtomicKind::setting_equals,   AtomicKind::cell_value_equals,   AtomicKind::clipboard_equals,
    AtomicKind::bookmark_exists};

std::string_view kind_name(AtomicKind kind);
std::optional<AtomicKind> kind_from_name(std::string_view name);

struct ParamSpec {
  std::string name;
  std::optional<ScalarType> type;  // nullopt accepts any scalar
  std::string doc;
};

/// Exactly the parameters each kind requires, in documentation order.
const std::vector<ParamSpec>& required_params(AtomicKind kind);

struct AtomicEvaluator {
  AtomicKind kind = AtomicKind::file_exists;
  std::map<std::string, Scalar> params;
  bool operator==(const AtomicEvaluator&) const = default;
};

/// Throws EvaluatorError when params do not match the kind's requirements or
/// address something that can never exist (bad path, bad cell ref).
void validate(const AtomicEvaluator& e);
AtomicEvaluator make_atomic(AtomicKind kind, std::map<std::string, Scalar> params);

AtomicEvaluator file_exists(std::string path);
AtomicEvaluator file_content_equals(std::string path, std::string content);
AtomicEvaluator url_equals(std::string url);
AtomicEvaluator setting_equals(std::string app, std::string key, std::string value);
AtomicEvaluator cell_value_equals(std::string cell, Scalar value);
AtomicEvaluator clipboard_equals(std::string text);
AtomicEvaluator bookmark_exists(std::string name, std::string folder);

enum class Combinator { all, any };

struct EvaluatorConfig {
  enum class Node { atomic, all, any };
  Node node = Node::atomic;
  AtomicEvaluator atomic;                 // used when node == atomic
  std::vector<EvaluatorConfig> children;  // used otherwise, non-empty
  bool operator==(const EvaluatorConfig&) const = default;

  static EvaluatorConfig leaf(AtomicEvaluator e);
  static EvaluatorConfig all_of(std::vector<EvaluatorConfig> children);
  static EvaluatorConfig any_of(std::vector<EvaluatorConfig> children);
};

inline constexpr std::size_t kMaxDepth = 4;

std::size_t depth(const EvaluatorConfig& cfg);
/// Leaves in left-to-right order.
std::vector<AtomicEvaluator> leaves(const EvaluatorConfig& cfg);
/// Throws EvaluatorError on empty children, depth > kMaxDepth or a bad leaf.
void validate(const EvaluatorConfig& cfg);

bool check_atomic(const world::WorldState& state, const AtomicEvaluator& e);
/// Throws SubstitutionError for keys the evaluator does not have.
AtomicEvaluator reprogram(const AtomicEvaluator& e, const std::map<std::string, Scalar>& substitutions);
/// Throws EvaluatorError for an empty leaf list.
EvaluatorConfig compose(const std::vector<AtomicEvaluator>& leaves, Combinator combinator);
/// Short-circuits in child order.
bool evaluate(const world::WorldState& state, const EvaluatorConfig& cfg);

nlohmann::json atomic_to_json(const AtomicEvaluator& e);
AtomicEvaluator atomic_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const EvaluatorConfig& cfg);
/// Validating loader; throws EvaluatorError.
EvaluatorConfig config_from_json(const nlohmann::json& doc);

/// One exemplar per kind, the starting point for reprogramming.
std::vector<AtomicEvaluator> atomic_library();
/// Machine-readable description of every kind and its required params.
nlohmann::json atomic_library_manifest();

}  // namespace hcua::verify
