#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cacperf {

/// A scenario violates one or more configuration invariants. Every
/// violation is collected, not just the first.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// A solver or mode was asked to run outside its preconditions
/// (wrong class count, unequal rates for the equal-rate recurrence, ...).
class ModeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The enumerated state space would exceed the configured safety limit.
class StateSpaceLimitError : public ModeError {
 public:
  using ModeError::ModeError;
};

/// Numerical failure inside the steady-state solver.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario document (syntax, types, unknown keys).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cacperf

namespace cacperf {

/// Input or output file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cacperf
