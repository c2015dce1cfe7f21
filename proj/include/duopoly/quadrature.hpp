#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

namespace duopoly::quadrature {

/// Composite Simpson rule over uniformly spaced values f(a), f(a+h), ...
/// An odd number of intervals closes with Simpson's 3/8 rule on the last three.
[[nodiscard]] inline double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size() == 0 ? 0 : f.size() - 1;  // intervals
  if (n < 2) {
    if (n == 1) return 0.5 * h * (f[0] + f[1]);
    return 0.0;
  }
  std::size_t even_end = (n % 2 == 0) ? n : n - 3;
  double sum = 0.0;
  if (even_end >= 2) {
    double odd = 0.0, even = 0.0;
    for (std::size_t k = 1; k < even_end; k += 2) odd += f[k];
    for (std::size_t k = 2; k < even_end; k += 2) even += f[k];
    sum = h / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[even_end]);
  } else {
    even_end = 0;
  }
  if (n % 2 == 1) {
    const std::size_t k = even_end;
    sum += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
  }
  return sum;
}

/// Composite Simpson rule for `func` on [a, b] with `intervals` (even) subintervals.
template <class F>
[[nodiscard]] double simpson(F&& func, double a, double b, std::size_t intervals) {
  if (intervals < 2 || intervals % 2 != 0) throw std::invalid_argument("simpson: intervals must be even and >= 2");
  const double h = (b - a) / static_cast<double>(intervals);
  double odd = 0.0, even = 0.0;
  for (std::size_t k = 1; k < intervals; ++k) {
    const double v = func(a + static_cast<double>(k) * h);
    (k % 2 == 1 ? odd : even) += v;
  }
  return h / 3.0 * (func(a) + 4.0 * odd + 2.0 * even + func(b));
}

}  // namespace duopoly::quadrature
