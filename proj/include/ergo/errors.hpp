#pragma once

#include <stdexcept>
#include <string>

namespace ergo {

/// Malformed or invalid game document. Syntax errors carry a 1-based
/// line/column; schema errors carry the JSON path of the offending field.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A documented precondition of an operation does not hold
/// (e.g. a set outside the lattice the operation is defined on).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numeric procedure did not reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration requested above the configured dimension guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ergo
