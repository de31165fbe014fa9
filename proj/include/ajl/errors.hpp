#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ajl {

/// Unknown attribute, duplicate attribute, or arity mismatch.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (invalid tree, non-monotone order, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a query has no join tree. Carries the hyperedges GYO could not remove.
class AcyclicityError : public std::runtime_error {
 public:
  AcyclicityError(std::string message, std::vector<std::vector<std::string>> residue)
      : std::runtime_error(std::move(message)), residue_(std::move(residue)) {}

  const std::vector<std::vector<std::string>>& residue() const noexcept { return residue_; }

 private:
  std::vector<std::vector<std::string>> residue_;
};

class EnumerationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The group-by variables are not contained in any single atom.
class NotZeroMaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ajl
