#pragma once

#include <stdexcept>
#include <string>

namespace flexmc {

/// Bad or missing configuration input. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative solver failed to converge. CLI exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, double last_iterate, double residual)
      : std::runtime_error(msg), last_iterate(last_iterate), residual(residual) {}
  double last_iterate;
  double residual;
};

/// Inputs outside an operation's mathematical domain.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Result not representable (e.g. exp overflow); carries the offending exponent.
class RangeError : public std::runtime_error {
 public:
  RangeError(const std::string& msg, double exponent)
      : std::runtime_error(msg), exponent(exponent) {}
  double exponent;
};

/// Violated internal invariant; indicates a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace flexmc
