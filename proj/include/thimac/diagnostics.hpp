#pragma once

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace thimac {

enum class ErrorKind { Syntax, DuplicateId, UnknownReference, EmptySet };

/// Failure while reading one of the line-oriented DSLs. Line and column are
/// 1-based; column 0 means the whole line.
class DslError : public std::runtime_error {
 public:
  DslError(ErrorKind kind, std::size_t line, std::size_t column, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// Failure of an operation on an already-built model (bad edit target etc).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Issue {
  std::string code;
  std::string message;

  bool operator==(const Issue&) const = default;
};

/// Outcome of a validation pass. Violations make a model unusable, warnings
/// are informational.
struct ValidationReport {
  std::vector<Issue> violations;
  std::vector<Issue> warnings;

  bool ok() const noexcept { return violations.empty(); }
  void violation(std::string code, std::string message);
  void warning(std::string code, std::string message);
  void merge(const ValidationReport& other, const std::string& prefix = {});

  bool operator==(const ValidationReport&) const = default;
};

std::ostream& operator<<(std::ostream& os, const ValidationReport& report);

}  // namespace thimac
