#pragma once

#include <stdexcept>
#include <string>

namespace wpcn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (negative energy,
/// negative target of the transcendental equation, eta outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The supplied bracket does not straddle a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// A function evaluation produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Upward bracket expansion hit its doubling limit.
class UnboundedRootError : public Error {
 public:
  using Error::Error;
};

/// Vector lengths or user counts disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An allocation handed to an operation violates the feasibility constraints.
class InvalidAllocation : public Error {
 public:
  using Error::Error;
};

/// Configuration file or command-line problems. `line` is 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace wpcn
