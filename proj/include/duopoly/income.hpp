#pragma once

// Finite-horizon incomes: h1 and h2 are the integrals of the firms' capital,
// h3 the integral of the proportional tax flow x (V1 + V2).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "duopoly/closed_form.hpp"
#include "duopoly/error.hpp"
#include "duopoly/model.hpp"
#include "duopoly/ode.hpp"
#include "duopoly/quadrature.hpp"

namespace duopoly::income {

enum class Mode { coupled_numeric, decoupled_numeric, decoupled_closed_form };

[[nodiscard]] constexpr std::string_view to_string(Mode m) noexcept {
  switch (m) {
    case Mode::coupled_numeric: return "coupled-numeric";
    case Mode::decoupled_numeric: return "decoupled-numeric";
    case Mode::decoupled_closed_form: return "decoupled-closed-form";
  }
  return "unknown";
}

struct IncomeReport {
  double x = 0.0;
  Mode mode = Mode::coupled_numeric;
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  double total = 0.0;
  double quadrature_error = 0.0;  // Richardson estimate, numeric modes only
};

[[nodiscard]] inline IncomeReport make_report(double x, Mode mode, double h1, double h2) {
  IncomeReport r{x, mode, h1, h2, x * (h1 + h2), 0.0, 0.0};
  r.total = r.h1 + r.h2 + r.h3;
  return r;
}

namespace detail {

inline const Proportional& require_proportional(const Scenario& s, const char* op) {
  validate(s);
  const auto* p = std::get_if<Proportional>(&s.tax);
  if (s.system != SystemKind::taxed || p == nullptr) {
    throw validation_error(std::string(op) + ": requires the taxed system with a proportional tax");
  }
  return *p;
}

}  // namespace detail

/// Integrates the taxed system (coupled or decoupled, per the scenario) and
/// applies composite Simpson to the uniformly spaced samples. The sample
/// density doubles until step-halving puts the quadrature error below 1e-8
/// relative, or sixteen times the requested density is reached.
[[nodiscard]] inline IncomeReport income_numeric(const Scenario& s) {
  const double x = detail::require_proportional(s, "income_numeric").x;
  const double horizon = s.horizon;
  auto n = static_cast<std::size_t>(std::ceil(horizon / s.solver.sample_dt_for(horizon) - 1e-9));
  n = std::max<std::size_t>(4, (n + 3) / 4 * 4);

  const Mode mode = s.coupling == Coupling::coupled ? Mode::coupled_numeric : Mode::decoupled_numeric;
  IncomeReport report;
  for (int refinement = 0; refinement <= 4; ++refinement, n *= 2) {
    Scenario run = s;
    run.solver.sample_dt = horizon / static_cast<double>(n);
    const ode::Trajectory traj = ode::integrate(run);
    if (traj.samples.size() != n + 1) throw std::logic_error("income_numeric: non-uniform sample grid");

    const double h = horizon / static_cast<double>(n);
    std::vector<double> fine1(n + 1), fine2(n + 1), coarse1(n / 2 + 1), coarse2(n / 2 + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      fine1[k] = traj.samples[k].v[0];
      fine2[k] = traj.samples[k].v[1];
      if (k % 2 == 0) {
        coarse1[k / 2] = fine1[k];
        coarse2[k / 2] = fine2[k];
      }
    }
    const double h1 = quadrature::simpson(fine1, h);
    const double h2 = quadrature::simpson(fine2, h);
    const double err1 = std::abs(h1 - quadrature::simpson(coarse1, 2 * h)) / 15.0;
    const double err2 = std::abs(h2 - quadrature::simpson(coarse2, 2 * h)) / 15.0;

    report = make_report(x, mode, h1, h2);
    report.quadrature_error = std::max(err1 / std::max(h1, 1e-300), err2 / std::max(h2, 1e-300));
    if (report.quadrature_error < 1e-8) break;
  }
  return report;
}

/// Incomes from the analytic integral of the decoupled logistic solutions.
[[nodiscard]] inline IncomeReport income_closed_form(const Scenario& s) {
  const double x = detail::require_proportional(s, "income_closed_form").x;
  const auto pair = closed_form::taxed_pair_solution(s);
  return make_report(x, Mode::decoupled_closed_form, pair.firm1.integral(s.horizon), pair.firm2.integral(s.horizon));
}

/// h1 + h2 without taxation in the decoupled reading.
[[nodiscard]] inline double total_income_untaxed(const Scenario& s) {
  validate(s);
  if (!std::holds_alternative<NoTax>(s.tax)) throw validation_error("total_income_untaxed: requires NoTax");
  if (s.system == SystemKind::lotka_volterra) {
    throw validation_error("total_income_untaxed: not defined for lotka_volterra");
  }
  Scenario taxed = with_tax_rate(s, 0.0);
  if (s.system == SystemKind::competing) taxed.demand.reset();
  const auto r = income_closed_form(taxed);
  return r.h1 + r.h2;
}

/// Incomes at tax rate `x` under `mode`; the scenario's own tax is replaced.
[[nodiscard]] inline IncomeReport evaluate(const Scenario& s, double x, Mode mode) {
  Scenario taxed = with_tax_rate(s, x);
  if (s.system == SystemKind::competing) taxed.demand.reset();
  switch (mode) {
    case Mode::coupled_numeric:
      taxed.coupling = Coupling::coupled;
      return income_numeric(taxed);
    case Mode::decoupled_numeric:
      taxed.coupling = Coupling::decoupled;
      return income_numeric(taxed);
    case Mode::decoupled_closed_form:
      taxed.coupling = Coupling::decoupled;
      return income_closed_form(taxed);
  }
  return {};
}

}  // namespace duopoly::income
