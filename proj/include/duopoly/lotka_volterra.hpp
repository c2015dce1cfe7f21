#pragma once

// Analytics for the predator-prey regime: the conserved quantity, the
// interior equilibrium, the oscillation period and one-period time averages.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "duopoly/error.hpp"
#include "duopoly/model.hpp"
#include "duopoly/ode.hpp"
#include "duopoly/quadrature.hpp"

namespace duopoly::lv {

/// Interior equilibrium (rho2 / kappa1, rho1 / kappa2).
[[nodiscard]] inline State equilibrium(const Scenario& s) noexcept {
  return {s.firm2.rho / s.firm1.kappa, s.firm1.rho / s.firm2.kappa};
}

/// rho2 ln V1 - kappa1 V1 + rho1 ln V2 - kappa2 V2, constant along solutions.
[[nodiscard]] inline double first_integral(const State& v, const Scenario& s) {
  if (!(v[0] > 0.0) || !(v[1] > 0.0)) throw validation_error("first_integral: state must be positive");
  return s.firm2.rho * std::log(v[0]) - s.firm1.kappa * v[0] + s.firm1.rho * std::log(v[1]) - s.firm2.kappa * v[1];
}

// Building blocks H(V1) = Vbar1 ln V1 - V1 and G(V2) = Vbar2 ln V2 - V2;
// the first integral equals kappa1 H + kappa2 G.
[[nodiscard]] inline double h_term(double v1, const Scenario& s) { return equilibrium(s)[0] * std::log(v1) - v1; }
[[nodiscard]] inline double g_term(double v2, const Scenario& s) { return equilibrium(s)[1] * std::log(v2) - v2; }
[[nodiscard]] inline double h_term_second_derivative(double v1, const Scenario& s) {
  return -equilibrium(s)[0] / (v1 * v1);
}
[[nodiscard]] inline double g_term_second_derivative(double v2, const Scenario& s) {
  return -equilibrium(s)[1] / (v2 * v2);
}

/// Oscillation period measured on a Poincare section through the initial state.
///
/// The section is V_c = V_c(0) for the component c with the larger relative
/// rate of change at t = 0 (so the section is crossed transversally), and only
/// crossings in the same direction as the initial motion count as returns.
/// Needs at least two returns whose spacings agree to 1e-4 relative.
[[nodiscard]] inline double detect_period(const ode::Trajectory& traj) {
  if (traj.samples.size() < 3) {
    throw analysis_error(analysis_error::kind::no_return_found, "no return found: trajectory too short");
  }
  const auto& samples = traj.samples;
  const State start = samples.front().v;

  double amplitude = 0.0;
  for (const auto& s : samples) {
    amplitude = std::max({amplitude, std::abs(s.v[0] - start[0]), std::abs(s.v[1] - start[1])});
  }
  if (amplitude < 1e-9) throw analysis_error(analysis_error::kind::at_equilibrium, "at equilibrium");

  const State& d0 = samples.front().dv;
  auto rel_rate = [&](std::size_t i) { return start[i] > 0.0 ? std::abs(d0[i]) / start[i] : 0.0; };
  const std::size_t c = rel_rate(0) >= rel_rate(1) ? 0 : 1;
  if (d0[c] == 0.0) throw analysis_error(analysis_error::kind::at_equilibrium, "at equilibrium");
  const double dir = d0[c] > 0.0 ? 1.0 : -1.0;
  const double level = start[c];

  std::vector<double> crossings;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double before = dir * (samples[k - 1].v[c] - level);
    const double after = dir * (samples[k].v[c] - level);
    if (!(before < 0.0 && after >= 0.0)) continue;
    double lo = samples[k - 1].t;
    double hi = samples[k].t;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dir * (ode::resample(traj, mid)[c] - level) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    crossings.push_back(0.5 * (lo + hi));
  }
  if (crossings.size() < 2) {
    throw analysis_error(analysis_error::kind::no_return_found,
                         "no return found: " + std::to_string(crossings.size()) +
                             " return(s) within the horizon, at least 2 needed; extend the horizon");
  }

  double lo = crossings[0], hi = crossings[0];
  for (std::size_t k = 1; k < crossings.size(); ++k) {
    const double gap = crossings[k] - crossings[k - 1];
    lo = std::min(lo, gap);
    hi = std::max(hi, gap);
  }
  const double period = crossings.back() / static_cast<double>(crossings.size());
  if ((hi - lo) / period >= 1e-4) {
    throw analysis_error(analysis_error::kind::inconsistent_returns,
                         "inconsistent returns: spacing spread " + std::to_string((hi - lo) / period));
  }
  return period;
}

/// Mean of V1 and V2 over [t_start, t_start + period].
[[nodiscard]] inline State time_averages(const ode::Trajectory& traj, double period, double t_start = 0.0) {
  if (!(period > 0.0)) throw validation_error("time_averages: period must be positive");
  constexpr std::size_t intervals = 4000;
  const double h = period / static_cast<double>(intervals);
  const State base = ode::resample(traj, t_start);
  std::vector<double> f1(intervals + 1), f2(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double t = k == intervals ? t_start + period : t_start + static_cast<double>(k) * h;
    const State v = ode::resample(traj, t);
    // Offsets from the window's first value keep a constant signal exact.
    f1[k] = v[0] - base[0];
    f2[k] = v[1] - base[1];
  }
  return {base[0] + quadrature::simpson(f1, h) / period, base[1] + quadrature::simpson(f2, h) / period};
}

struct LVAnalysis {
  State equilibrium{};
  double x_invariant = 0.0;     // first integral at the initial state
  double max_drift = 0.0;       // max |X(t) - X(0)| over the samples
  std::optional<double> period; // empty at equilibrium
  State averages{};
  ode::Trajectory trajectory;
};

/// Integrates a lotka_volterra scenario and runs every analysis on it.
/// Throws analysis_error when no period can be detected away from equilibrium.
[[nodiscard]] inline LVAnalysis analyze(const Scenario& s) {
  validate(s);
  if (s.system != SystemKind::lotka_volterra) throw validation_error("analyze: requires the lotka_volterra system");
  if (!(s.firm1.v0 > 0.0) || !(s.firm2.v0 > 0.0)) throw validation_error("analyze: initial capitals must be positive");

  LVAnalysis out;
  out.equilibrium = equilibrium(s);
  out.trajectory = ode::integrate(s);
  out.x_invariant = first_integral(s.initial_state(), s);
  for (const auto& sample : out.trajectory.samples) {
    if (sample.v[0] > 0.0 && sample.v[1] > 0.0) {
      out.max_drift = std::max(out.max_drift, std::abs(first_integral(sample.v, s) - out.x_invariant));
    }
  }
  try {
    out.period = detect_period(out.trajectory);
    out.averages = time_averages(out.trajectory, *out.period);
  } catch (const analysis_error& e) {
    if (e.error_kind() != analysis_error::kind::at_equilibrium) throw;
    out.averages = s.initial_state();
  }
  return out;
}

}  // namespace duopoly::lv
