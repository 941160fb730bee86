#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcua {

class ManifestError : public std::runtime_error {
 public:
  ManifestError(std::string entry, const std::string& reason)
      : std::runtime_error("manifest error at '" + entry + "': " + reason),
        entry_(std::move(entry)) {}
  const std::string& entry() const noexcept { return entry_; }

 private:
  std::string entry_;
};

class SelectorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& reason)
      : std::runtime_error("parse error at " + std::to_string(position) + ": " + reason),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class EvaluatorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Reprogramming with a parameter the evaluator does not have.
class SubstitutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RegistryError : public std::runtime_error {
 public:
  RegistryError(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  /// "grounding_forbidden", "duplicate_name", "undeclared_param", "bad_name",
  /// "bad_body", "empty_body", "bad_spec"
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LoadError : public std::runtime_error {
 public:
  LoadError(std::size_t line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hcua
