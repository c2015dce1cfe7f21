#pragma once

#include <stdexcept>
#include <string>

namespace duopoly {

/// A scenario, config value, or argument violates a documented invariant.
class validation_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The numerical integrator could not complete the run.
class integration_error : public std::runtime_error {
public:
  enum class kind { underflow, divergence };

  integration_error(kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}

  [[nodiscard]] kind error_kind() const noexcept { return kind_; }

private:
  kind kind_;
};

/// Post-processing of a trajectory failed (period detection and the like).
class analysis_error : public std::runtime_error {
public:
  enum class kind { no_return_found, at_equilibrium, inconsistent_returns };

  analysis_error(kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}

  [[nodiscard]] kind error_kind() const noexcept { return kind_; }

private:
  kind kind_;
};

/// A logistic trajectory never attains the requested level.
class unreachable_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace duopoly
