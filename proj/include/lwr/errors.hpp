#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lwr {

/// Argument outside the admissible state space (e.g. a density outside [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested operation exists only for a narrower configuration
/// (the derivative table and everything built on it require gamma = 2).
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// mu outside (0, min L) or another violated certificate precondition.
class InfeasibleCertificate : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Closed-form Riccati solution requested at or beyond its blow-up time.
class PastSingularity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A trace-based check was asked to run against an uncertified report.
class InapplicableCheck : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace lwr
