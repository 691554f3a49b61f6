#pragma once

#include <stdexcept>
#include <string>

namespace becflow {

/// Rejected physical input (bad value, bad key, broken regime assumption).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quadrature or horizon search did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved relative tolerance " +
                           std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A bisection bracket does not contain a classification change.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation undefined for its inputs (e.g. flux of coincident states).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace becflow
