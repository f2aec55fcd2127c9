#pragma once

#include <stdexcept>
#include <string>

namespace zrlab {

/// Raised when a caller breaks an API precondition (mismatched grids,
/// invalid parameters, out-of-range arguments).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A computed quantity failed a consistency check (e.g. a functional that
/// must be real came out with an imaginary residue).
class NumericalHealthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration text could not be parsed or violates a hypothesis.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zrlab
