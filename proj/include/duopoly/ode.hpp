#pragma once

// Adaptive Dormand-Prince 5(4) integration of the two-firm systems.
//
// Steps are clipped so that every output sample is an accepted step
// endpoint; the derivative is stored with each sample so that `resample`
// can evaluate a cubic Hermite interpolant between them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "duopoly/error.hpp"
#include "duopoly/model.hpp"

namespace duopoly::ode {

struct Sample {
  double t = 0.0;
  State v{};   // capital (V1, V2)
  State dv{};  // right-hand side at (t, v), zero for pinned components
};

enum class EventKind { extinction_firm1, extinction_firm2 };

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::extinction_firm1;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<Event> events;

  [[nodiscard]] bool empty() const noexcept { return samples.empty(); }
  [[nodiscard]] double t_begin() const { return samples.front().t; }
  [[nodiscard]] double t_end() const { return samples.back().t; }
};

/// Output sample times on [0, horizon]: multiples of `dt` plus the endpoint.
[[nodiscard]] inline std::vector<double> sample_times(double horizon, double dt) {
  std::vector<double> times;
  const auto n = static_cast<std::size_t>(std::floor(horizon / dt * (1.0 + 1e-12)));
  times.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) times.push_back(static_cast<double>(k) * dt);
  // Snap a last multiple that lands within rounding of the horizon.
  if (horizon - times.back() <= 1e-9 * dt) {
    times.back() = horizon;
  } else {
    times.push_back(horizon);
  }
  if (times.size() > 1 && times.front() == times.back()) times.pop_back();
  return times;
}

namespace detail {

// Dormand & Prince (1980) RK5(4)7FM tableau.
struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  // Difference between the 5th- and 4th-order weights.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (const auto& [a, k] : terms) acc += a * (*k)[i];
    out[i] += h * acc;
  }
  return out;
}

inline bool all_finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Integrates `f(t, y) -> State` from `y0` on [0, horizon].
///
/// Components that fall below `extinction_floor` are pinned to zero and
/// recorded as extinction events; components starting at zero stay pinned.
template <class Rhs>
[[nodiscard]] Trajectory integrate_system(Rhs&& f, const State& y0, double horizon, const SolverSettings& settings,
                                          double extinction_floor = default_extinction_floor) {
  using T = detail::DormandPrince;
  constexpr double safety = 0.9;
  constexpr double alpha = 0.7 / 5.0;  // PI controller exponents
  constexpr double beta = 0.4 / 5.0;
  constexpr double min_factor = 0.2;
  constexpr double max_factor = 5.0;

  const double rtol = settings.rel_tol;
  const double atol = settings.abs_tol;
  const double max_step = settings.max_step_for(horizon);
  const double min_step = 1e-14 * horizon;
  const std::vector<double> times = sample_times(horizon, settings.sample_dt_for(horizon));

  std::array<bool, 2> pinned{};
  Trajectory traj;
  traj.samples.reserve(times.size());

  auto g = [&](double t, const State& y) {
    State d = f(t, y);
    for (std::size_t i = 0; i < 2; ++i) {
      if (pinned[i]) d[i] = 0.0;
    }
    return d;
  };
  auto error_norm = [&](const State& y, const State& y_new, const State& err) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      sum += (err[i] / scale) * (err[i] / scale);
    }
    return std::sqrt(sum / 2.0);
  };

  State y = y0;
  double t = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    if (!(y[i] >= extinction_floor)) {
      pinned[i] = true;
      if (y[i] > 0.0) traj.events.push_back({0.0, i == 0 ? EventKind::extinction_firm1 : EventKind::extinction_firm2});
      y[i] = 0.0;
    }
  }
  State k1 = g(t, y);
  traj.samples.push_back({0.0, y0, k1});

  // Initial step from the scale of the solution and its derivative.
  double h_proposed = max_step;
  {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const double sc = atol + rtol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    if (d0 > 1e-5 && d1 > 1e-5) h_proposed = std::min(max_step, 0.01 * d0 / d1);
    h_proposed = std::max(h_proposed, 1e3 * min_step);
  }

  double err_prev = 1e-4;
  bool last_rejected = false;
  std::size_t next = 1;

  while (next < times.size()) {
    const double target = times[next];
    double h = std::min(h_proposed, max_step);
    bool hits_sample = false;
    if (t + h >= target - 1e-12 * horizon) {
      h = target - t;
      hits_sample = true;
    }

    const State k2 = g(t + T::c2 * h, detail::axpy(y, h, {{T::a21, &k1}}));
    const State k3 = g(t + T::c3 * h, detail::axpy(y, h, {{T::a31, &k1}, {T::a32, &k2}}));
    const State k4 = g(t + T::c4 * h, detail::axpy(y, h, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}));
    const State k5 =
        g(t + T::c5 * h, detail::axpy(y, h, {{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}));
    const State k6 = g(t + h, detail::axpy(y, h, {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4},
                                                  {T::a65, &k5}}));
    State y_new = detail::axpy(y, h, {{T::b1, &k1}, {T::b3, &k3}, {T::b4, &k4}, {T::b5, &k5}, {T::b6, &k6}});
    if (!detail::all_finite(y_new)) {
      if (h > min_step * 2.0) {
        h_proposed = h * 0.25;
        last_rejected = true;
        continue;
      }
      throw integration_error(integration_error::kind::divergence,
                              "divergence: non-finite state at t = " + std::to_string(t));
    }
    const State k7 = g(t + h, y_new);
    const State err = detail::axpy(State{0.0, 0.0}, h,
                                   {{T::e1, &k1}, {T::e3, &k3}, {T::e4, &k4}, {T::e5, &k5}, {T::e6, &k6}, {T::e7, &k7}});
    const double err_norm = error_norm(y, y_new, err);
    if (!std::isfinite(err_norm)) {
      throw integration_error(integration_error::kind::divergence,
                              "divergence: non-finite error estimate at t = " + std::to_string(t));
    }

    if (err_norm > 1.0) {
      const double factor = std::max(min_factor, safety * std::pow(err_norm, -alpha));
      h_proposed = h * factor;
      last_rejected = true;
      if (h_proposed < min_step) {
        throw integration_error(integration_error::kind::underflow,
                                "stiffness/underflow: step size below 1e-14 * horizon at t = " + std::to_string(t));
      }
      continue;
    }

    bool negative = false;
    for (std::size_t i = 0; i < 2; ++i) negative |= !pinned[i] && y_new[i] < -atol;
    if (negative && h * 0.5 >= min_step) {
      h_proposed = h * 0.5;
      last_rejected = true;
      continue;
    }
    // Past this point a negative component can only remain when halving
    // would underflow; it is treated as extinct below.

    const double t_new = hits_sample ? target : t + h;
    bool newly_pinned = false;
    for (std::size_t i = 0; i < 2; ++i) {
      if (!pinned[i] && y_new[i] < extinction_floor) {
        pinned[i] = true;
        newly_pinned = true;
        y_new[i] = 0.0;
        traj.events.push_back({t_new, i == 0 ? EventKind::extinction_firm1 : EventKind::extinction_firm2});
      }
    }

    const double h_clipped_from = h_proposed;
    double factor = safety * std::pow(err_norm, -alpha) * std::pow(err_prev, beta);
    factor = std::clamp(factor, min_factor, last_rejected ? 1.0 : max_factor);
    h_proposed = h * factor;
    if (hits_sample && h < h_clipped_from) h_proposed = std::max(h_proposed, h_clipped_from);
    err_prev = std::max(err_norm, 1e-4);
    last_rejected = false;

    t = t_new;
    y = y_new;
    k1 = newly_pinned ? g(t, y) : k7;
    if (hits_sample) {
      traj.samples.push_back({t, y, k1});
      ++next;
    }
  }
  return traj;
}

/// Integrates the scenario's own system on [0, horizon].
[[nodiscard]] inline Trajectory integrate(const Scenario& scenario) {
  validate(scenario);
  return integrate_system([&](double t, const State& v) { return rhs(scenario, v, t); }, scenario.initial_state(),
                          scenario.horizon, scenario.solver, scenario.extinction_floor);
}

/// Cubic Hermite interpolation of the trajectory at time `t`.
[[nodiscard]] inline State resample(const Trajectory& traj, double t) {
  if (traj.empty() || !(t >= traj.t_begin() && t <= traj.t_end())) {
    throw std::out_of_range("resample: time " + std::to_string(t) + " outside trajectory range");
  }
  const auto& s = traj.samples;
  auto it = std::upper_bound(s.begin(), s.end(), t, [](double value, const Sample& x) { return value < x.t; });
  if (it == s.begin()) ++it;
  if (it == s.end()) return s.back().v;
  const Sample& a = *(it - 1);
  const Sample& b = *it;
  if (t == a.t) return a.v;
  if (t == b.t) return b.v;

  const double h = b.t - a.t;
  const double u = (t - a.t) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  State out{};
  for (std::size_t i = 0; i < 2; ++i) {
    out[i] = h00 * a.v[i] + h10 * h * a.dv[i] + h01 * b.v[i] + h11 * h * b.dv[i];
  }
  return out;
}

[[nodiscard]] inline std::vector<State> resample(const Trajectory& traj, std::span<const double> times) {
  std::vector<State> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(resample(traj, t));
  return out;
}

}  // namespace duopoly::ode
