#include "thimac/diagnostics.hpp"

namespace thimac {

namespace {

std::string locate(std::size_t line, std::size_t column, const std::string& message) {
  std::string out = "line " + std::to_string(line);
  if (column > 0) out += ", column " + std::to_string(column);
  return out + ": " + message;
}

}  // namespace

DslError::DslError(ErrorKind kind, std::size_t line, std::size_t column,
                   const std::string& message)
    : std::runtime_error(locate(line, column, message)),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(message) {}

void ValidationReport::violation(std::string code, std::string message) {
  violations.push_back({std::move(code), std::move(message)});
}

void ValidationReport::warning(std::string code, std::string message) {
  warnings.push_back({std::move(code), std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other, const std::string& prefix) {
  for (const auto& v : other.violations) violations.push_back({v.code, prefix + v.message});
  for (const auto& w : other.warnings) warnings.push_back({w.code, prefix + w.message});
}

std::ostream& operator<<(std::ostream& os, const ValidationReport& report) {
  for (const auto& v : report.violations) os << "violation [" << v.code << "] " << v.message << '\n';
  for (const auto& w : report.warnings) os << "warning [" << w.code << "] " << w.message << '\n';
  return os;
}

}  // namespace thimac
