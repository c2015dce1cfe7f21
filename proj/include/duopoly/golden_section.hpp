#pragma once

#include <cmath>

namespace duopoly::optimize {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a minimum of a unimodal `f` on [a, b], stopping
/// once the bracket is narrower than `tol`. Returns the best point evaluated.
template <class F>
[[nodiscard]] ScalarMinimum golden_section_minimize(F&& f, double a, double b, double tol = 1e-6) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  ScalarMinimum best{a, f(a), 1};
  auto consider = [&best](double x, double v) {
    ++best.evaluations;
    if (v < best.value) {
      best.x = x;
      best.value = v;
    }
  };
  consider(b, f(b));

  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  consider(c, fc);
  consider(d, fd);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  const double mid = 0.5 * (a + b);
  consider(mid, f(mid));
  return best;
}

}  // namespace duopoly::optimize
