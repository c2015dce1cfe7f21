#pragma once

// Domain types for the two-firm capital dynamics and the right-hand sides of
// the four supported ODE systems. Capital and time are dimensionless.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "duopoly/error.hpp"

namespace duopoly {

/// Capital of firm 1 and firm 2.
using State = std::array<double, 2>;

struct FirmParams {
  double rho = 1.0;    // growth rate
  double kappa = 1.0;  // saturation coefficient
  double v0 = 0.0;     // initial capital
};

/// Linear demand F(V1, V2) = lambda1 V1 + lambda2 V2.
struct DemandSpec {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};

struct NoTax {};

/// Fixed tax amounts U1, U2 collected per unit time.
struct LumpSum {
  double u1 = 0.0;
  double u2 = 0.0;
};

/// Tax U = x V, a fixed share of capital per unit time.
struct Proportional {
  double x = 0.0;
};

using TaxPolicy = std::variant<NoTax, LumpSum, Proportional>;

enum class SystemKind {
  competing,       // shared saturation F = kappa1 V1 + kappa2 V2
  linear_demand,   // shared saturation F = lambda1 V1 + lambda2 V2
  lotka_volterra,  // V1' = V1(rho1 - kappa2 V2), V2' = V2(-rho2 + kappa1 V1)
  taxed,           // linear_demand minus the tax flow
};

/// Whether the cross-saturation terms are kept. The decoupled reading drops
/// the competitor's contribution to F, leaving one logistic equation per firm.
enum class Coupling { coupled, decoupled };

struct SolverSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::optional<double> max_step;   // horizon / 100 when unset
  std::optional<double> sample_dt;  // horizon / 1000 when unset

  [[nodiscard]] double max_step_for(double horizon) const { return max_step.value_or(horizon / 100.0); }
  [[nodiscard]] double sample_dt_for(double horizon) const { return sample_dt.value_or(horizon / 1000.0); }
};

inline constexpr double default_extinction_floor = 1e-12;

struct Scenario {
  FirmParams firm1;
  FirmParams firm2;
  std::optional<DemandSpec> demand;  // defaults to lambda_i = kappa_i
  SystemKind system = SystemKind::competing;
  TaxPolicy tax = NoTax{};
  Coupling coupling = Coupling::coupled;
  double horizon = 10.0;
  SolverSettings solver;
  double extinction_floor = default_extinction_floor;

  /// Demand weights actually used by linear_demand and taxed.
  [[nodiscard]] DemandSpec effective_demand() const {
    return demand.value_or(DemandSpec{firm1.kappa, firm2.kappa});
  }

  [[nodiscard]] const FirmParams& firm(int i) const { return i == 0 ? firm1 : firm2; }
  [[nodiscard]] State initial_state() const { return {firm1.v0, firm2.v0}; }
};

[[nodiscard]] constexpr std::string_view to_string(SystemKind k) noexcept {
  switch (k) {
    case SystemKind::competing: return "competing";
    case SystemKind::linear_demand: return "linear_demand";
    case SystemKind::lotka_volterra: return "lotka_volterra";
    case SystemKind::taxed: return "taxed";
  }
  return "unknown";
}

[[nodiscard]] constexpr std::string_view to_string(Coupling c) noexcept {
  return c == Coupling::coupled ? "coupled" : "decoupled";
}

[[nodiscard]] inline std::optional<SystemKind> parse_system_kind(std::string_view s) noexcept {
  for (auto k : {SystemKind::competing, SystemKind::linear_demand, SystemKind::lotka_volterra, SystemKind::taxed}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

/// Proportional rate of the scenario's tax, 0 when the policy is not proportional.
[[nodiscard]] inline double proportional_rate(const TaxPolicy& tax) noexcept {
  if (const auto* p = std::get_if<Proportional>(&tax)) return p->x;
  return 0.0;
}

/// Copy of `s` switched to the taxed system with proportional rate `x`.
[[nodiscard]] inline Scenario with_tax_rate(Scenario s, double x) {
  s.system = SystemKind::taxed;
  s.tax = Proportional{x};
  return s;
}

namespace detail {

inline void require(bool ok, const std::string& message) {
  if (!ok) throw validation_error(message);
}

inline void validate_firm(const FirmParams& f, std::string_view name) {
  const std::string p = std::string(name) + ": ";
  require(std::isfinite(f.rho) && f.rho > 0.0, p + "rho must be positive");
  require(std::isfinite(f.kappa) && f.kappa > 0.0, p + "kappa must be positive");
  require(std::isfinite(f.v0) && f.v0 >= 0.0, p + "v0 must be nonnegative");
}

}  // namespace detail

/// Returns `s` unchanged if every invariant holds; throws validation_error
/// naming the first violated invariant otherwise.
inline const Scenario& validate(const Scenario& s) {
  using detail::require;
  detail::validate_firm(s.firm1, "firm1");
  detail::validate_firm(s.firm2, "firm2");

  if (s.demand) {
    require(std::isfinite(s.demand->lambda1) && s.demand->lambda1 > 0.0, "demand: lambda1 must be positive");
    require(std::isfinite(s.demand->lambda2) && s.demand->lambda2 > 0.0, "demand: lambda2 must be positive");
  }

  if (const auto* p = std::get_if<Proportional>(&s.tax)) {
    require(std::isfinite(p->x) && p->x >= 0.0 && p->x < 1.0, "x out of [0,1)");
  } else if (const auto* l = std::get_if<LumpSum>(&s.tax)) {
    require(std::isfinite(l->u1) && l->u1 >= 0.0, "tax: u1 must be nonnegative and finite");
    require(std::isfinite(l->u2) && l->u2 >= 0.0, "tax: u2 must be nonnegative and finite");
  }

  switch (s.system) {
    case SystemKind::taxed:
      require(!std::holds_alternative<NoTax>(s.tax), "taxed system requires a tax policy");
      break;
    case SystemKind::competing:
    case SystemKind::linear_demand:
      require(std::holds_alternative<NoTax>(s.tax), "tax policy requires the taxed system");
      break;
    case SystemKind::lotka_volterra:
      require(s.coupling == Coupling::coupled, "decoupled mode is not defined for lotka_volterra");
      break;
  }

  require(std::isfinite(s.horizon) && s.horizon > 0.0, "horizon must be positive");
  require(std::isfinite(s.solver.rel_tol) && s.solver.rel_tol > 0.0, "solver: rel_tol must be positive");
  require(std::isfinite(s.solver.abs_tol) && s.solver.abs_tol > 0.0, "solver: abs_tol must be positive");
  const double max_step = s.solver.max_step_for(s.horizon);
  require(std::isfinite(max_step) && max_step > 0.0, "solver: max_step must be positive");
  require(max_step >= 1e-12 * s.horizon, "solver: max_step below 1e-12 * horizon");
  const double sample_dt = s.solver.sample_dt_for(s.horizon);
  require(std::isfinite(sample_dt) && sample_dt > 0.0 && sample_dt <= s.horizon,
          "solver: sample_dt must be positive and not exceed horizon");
  require(std::isfinite(s.extinction_floor) && s.extinction_floor > 0.0, "extinction_floor must be positive");
  return s;
}

/// Right-hand side (dV1/dt, dV2/dt) of `system` with the parameters of `s`.
/// The time argument is unused; every system is autonomous.
[[nodiscard]] inline State rhs(SystemKind system, const Scenario& s, const State& v, double /*t*/ = 0.0) noexcept {
  const FirmParams& f1 = s.firm1;
  const FirmParams& f2 = s.firm2;
  const bool coupled = s.coupling == Coupling::coupled;
  const double c = coupled ? 1.0 : 0.0;

  switch (system) {
    case SystemKind::competing: {
      const double sat1 = f1.kappa * (f1.kappa * v[0] + c * f2.kappa * v[1]);
      const double sat2 = f2.kappa * (f2.kappa * v[1] + c * f1.kappa * v[0]);
      return {v[0] * (f1.rho - sat1), v[1] * (f2.rho - sat2)};
    }
    case SystemKind::lotka_volterra:
      return {v[0] * (f1.rho - f2.kappa * v[1]), v[1] * (-f2.rho + f1.kappa * v[0])};
    case SystemKind::linear_demand:
    case SystemKind::taxed: {
      const auto d = s.effective_demand();
      const double sat1 = f1.kappa * (d.lambda1 * v[0] + c * d.lambda2 * v[1]);
      const double sat2 = f2.kappa * (c * d.lambda1 * v[0] + d.lambda2 * v[1]);
      State out{v[0] * (f1.rho - sat1), v[1] * (f2.rho - sat2)};
      if (system == SystemKind::taxed) {
        if (const auto* p = std::get_if<Proportional>(&s.tax)) {
          out[0] -= p->x * v[0];
          out[1] -= p->x * v[1];
        } else if (const auto* l = std::get_if<LumpSum>(&s.tax)) {
          out[0] -= l->u1;
          out[1] -= l->u2;
        }
      }
      return out;
    }
  }
  return {0.0, 0.0};
}

[[nodiscard]] inline State rhs(const Scenario& s, const State& v, double t = 0.0) noexcept {
  return rhs(s.system, s, v, t);
}

}  // namespace duopoly
