#pragma once

// Analytic results for the shared-saturation systems: the logistic solution
// of a single (decoupled) firm, its inverse, the power-ratio law and the
// survivor rule.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <variant>

#include "duopoly/error.hpp"
#include "duopoly/model.hpp"

namespace duopoly::closed_form {

namespace detail {

// (1 - e^{-r t}) / r, continuous through r = 0.
inline double decay_weight(double r, double t) { return r == 0.0 ? t : -std::expm1(-r * t) / r; }

// (e^{r t} - 1) / r, continuous through r = 0.
inline double growth_weight(double r, double t) { return r == 0.0 ? t : std::expm1(r * t) / r; }

}  // namespace detail

/// Solution of V' = V (rho_eff - kappa_sq V), V(0) = v0.
///
/// Written as V(t) = rho_eff D e^{rho_eff t} / (1 + kappa_sq D e^{rho_eff t})
/// with D = v0 / (rho_eff - kappa_sq v0); evaluated in an equivalent form
/// that stays finite when D is infinite or rho_eff vanishes.
struct LogisticSolution {
  double rho_eff = 0.0;   // rho - x
  double kappa_sq = 1.0;  // self-saturation kappa * lambda
  double d_const = 0.0;   // D; infinite at the equilibrium start
  double v0 = 0.0;

  /// True when v0 is zero or sits on the positive equilibrium.
  [[nodiscard]] bool is_constant() const noexcept {
    const double gap = rho_eff - kappa_sq * v0;
    return v0 == 0.0 || std::abs(gap) <= 1e-15 * std::max(std::abs(rho_eff), kappa_sq * v0);
  }

  /// Long-run level rho_eff / kappa_sq (nonpositive when the tax exceeds growth).
  [[nodiscard]] double equilibrium() const noexcept { return rho_eff / kappa_sq; }

  [[nodiscard]] double value(double t) const noexcept {
    if (is_constant() || t == 0.0) return v0;
    const double denom = std::exp(-rho_eff * t) + kappa_sq * v0 * detail::decay_weight(rho_eff, t);
    if (std::isinf(denom)) return 0.0;
    return v0 / denom;
  }

  /// Exact integral of value(t) over [0, horizon]:
  /// ln(1 + kappa_sq v0 (e^{rho_eff T} - 1) / rho_eff) / kappa_sq.
  [[nodiscard]] double integral(double horizon) const noexcept {
    if (v0 == 0.0) return 0.0;
    if (is_constant()) return v0 * horizon;
    const double rt = rho_eff * horizon;
    if (rt > 500.0) {
      // e^{rT} would overflow; factor it out of the logarithm.
      const double a = kappa_sq * v0 / rho_eff;
      return (rt + std::log(a) + std::log1p((1.0 / a - 1.0) * std::exp(-rt))) / kappa_sq;
    }
    return std::log1p(kappa_sq * v0 * detail::growth_weight(rho_eff, horizon)) / kappa_sq;
  }
};

/// Carrying capacity rho / (kappa lambda) of a firm alone on the market.
[[nodiscard]] inline double equilibrium_single(double rho, double kappa, double lambda) {
  if (!(rho > 0.0) || !(kappa > 0.0) || !(lambda > 0.0)) {
    throw validation_error("equilibrium_single: rho, kappa and lambda must be positive");
  }
  return rho / (kappa * lambda);
}

[[nodiscard]] inline LogisticSolution logistic_solution(double rho, double kappa_sq, double x, double v0) {
  if (!std::isfinite(v0) || v0 < 0.0) throw validation_error("logistic_solution: v0 must be nonnegative");
  if (!std::isfinite(kappa_sq) || kappa_sq <= 0.0) throw validation_error("logistic_solution: kappa_sq must be positive");
  if (!std::isfinite(rho) || !std::isfinite(x)) throw validation_error("logistic_solution: rho and x must be finite");
  LogisticSolution s{rho - x, kappa_sq, 0.0, v0};
  const double gap = s.rho_eff - kappa_sq * v0;
  s.d_const = s.is_constant() && v0 != 0.0 ? std::numeric_limits<double>::infinity() : v0 / gap;
  return s;
}

/// The formula with the tax-free constant D = v0 / (rho - kappa_sq v0)
/// substituted into (rho - x) / (kappa_sq + e^{t(x - rho)} D (rho - x)).
/// It does not satisfy V(0) = v0 and is kept for comparison reports only.
[[nodiscard]] inline double uncorrected_taxed_value(double rho, double kappa_sq, double x, double v0, double t) {
  const double d = v0 / (rho - kappa_sq * v0);
  const double e = std::exp(t * (x - rho));
  return (rho - x) / (kappa_sq + e * d * rho - e * d * x);
}

namespace detail {

inline void require_shared_saturation(const Scenario& s, const char* op) {
  if (s.system != SystemKind::competing && s.system != SystemKind::linear_demand) {
    throw validation_error(std::string(op) + ": requires a competing or linear_demand system");
  }
  if (s.coupling != Coupling::coupled) throw validation_error(std::string(op) + ": requires the coupled system");
  if (!(s.firm1.v0 > 0.0) || !(s.firm2.v0 > 0.0)) {
    throw validation_error(std::string(op) + ": initial capitals must be positive");
  }
}

}  // namespace detail

/// ln(V1^kappa2 / V2^kappa1) at time t; linear in t along any solution.
[[nodiscard]] inline double log_ratio_law(const Scenario& s, double t) {
  detail::require_shared_saturation(s, "ratio_law");
  const auto& f1 = s.firm1;
  const auto& f2 = s.firm2;
  return f2.kappa * std::log(f1.v0) - f1.kappa * std::log(f2.v0) + (f1.rho * f2.kappa - f2.rho * f1.kappa) * t;
}

/// V1^kappa2 / V2^kappa1 at time t.
[[nodiscard]] inline double ratio_law(const Scenario& s, double t) {
  detail::require_shared_saturation(s, "ratio_law");
  const auto& f1 = s.firm1;
  const auto& f2 = s.firm2;
  return std::pow(f1.v0, f2.kappa) / std::pow(f2.v0, f1.kappa) *
         std::exp((f1.rho * f2.kappa - f2.rho * f1.kappa) * t);
}

enum class Survivor { firm1_persists, firm2_persists, coexistence };

[[nodiscard]] constexpr const char* to_string(Survivor s) noexcept {
  switch (s) {
    case Survivor::firm1_persists: return "firm1_persists";
    case Survivor::firm2_persists: return "firm2_persists";
    case Survivor::coexistence: return "coexistence";
  }
  return "unknown";
}

/// The firm with the larger rho / kappa drives the other out of the market.
[[nodiscard]] inline Survivor survivor(const Scenario& s) {
  detail::require_shared_saturation(s, "survivor");
  const double advantage = s.firm1.rho * s.firm2.kappa - s.firm2.rho * s.firm1.kappa;
  if (advantage > 0.0) return Survivor::firm1_persists;
  if (advantage < 0.0) return Survivor::firm2_persists;
  return Survivor::coexistence;
}

/// Time for the logistic solution to move from `v_from` to `v_to`.
/// Negative when `v_to` lies before `v_from` on the same trajectory.
[[nodiscard]] inline double time_to_reach(double rho, double kappa_sq, double x, double v_from, double v_to) {
  if (!(v_from > 0.0) || !(v_to > 0.0)) throw validation_error("time_to_reach: capitals must be positive");
  if (!(kappa_sq > 0.0)) throw validation_error("time_to_reach: kappa_sq must be positive");
  if (v_from == v_to) return 0.0;
  const double r = rho - x;
  if (r == 0.0) return (1.0 / v_to - 1.0 / v_from) / kappa_sq;

  const double gap_from = r - kappa_sq * v_from;
  const double gap_to = r - kappa_sq * v_to;
  if (gap_to == 0.0 || gap_from == 0.0 || (gap_from > 0.0) != (gap_to > 0.0)) {
    throw unreachable_error("unreachable: the equilibrium " + std::to_string(r / kappa_sq) +
                            " is never reached or crossed in finite time");
  }
  return std::log((v_to / gap_to) * (gap_from / v_from)) / r;
}

/// Both firms' taxed solutions with the cross-saturation term dropped.
struct TaxedPair {
  LogisticSolution firm1;
  LogisticSolution firm2;
  Coupling mode = Coupling::decoupled;
};

[[nodiscard]] inline TaxedPair taxed_pair_solution(const Scenario& s) {
  validate(s);
  const auto* p = std::get_if<Proportional>(&s.tax);
  if (s.system != SystemKind::taxed || p == nullptr) {
    throw validation_error("taxed_pair_solution: requires the taxed system with a proportional tax");
  }
  const auto d = s.effective_demand();
  return {logistic_solution(s.firm1.rho, s.firm1.kappa * d.lambda1, p->x, s.firm1.v0),
          logistic_solution(s.firm2.rho, s.firm2.kappa * d.lambda2, p->x, s.firm2.v0), Coupling::decoupled};
}

}  // namespace duopoly::closed_form
