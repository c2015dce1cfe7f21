#pragma once

// Compromise tax rate between the two firms and the state.
//
// Each agent's income h_i(x) is compared with its best achievable income
// C_i; the compromise rate minimizes the largest shortfall C_i - h_i(x)
// over x in [0, 1 - 1/N], first on the uniform grid x_j = j / N and then by
// golden-section refinement around the best grid point.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "duopoly/error.hpp"
#include "duopoly/golden_section.hpp"
#include "duopoly/income.hpp"
#include "duopoly/model.hpp"

namespace duopoly::compromise {

/// How each agent's best income C_i is defined.
///  - empirical: the largest h_i(x) found on the searched set (grid plus
///    golden-section refinement around the grid argmax).
///  - endpoint: C1 = h1(0), C2 = h2(0) and C3 = h3 at the grid point
///    closest to x = 1.
enum class C3Convention { empirical, endpoint };

[[nodiscard]] constexpr std::string_view to_string(C3Convention c) noexcept {
  return c == C3Convention::empirical ? "empirical" : "endpoint";
}

using Triple = std::array<double, 3>;

struct MaxIncomes {
  Triple empirical{};
  Triple endpoint{};
  Triple argmax_empirical{};  // rate at which each empirical maximum is attained

  [[nodiscard]] const Triple& values(C3Convention c) const noexcept {
    return c == C3Convention::empirical ? empirical : endpoint;
  }
};

struct Options {
  std::size_t grid_size = 101;
  income::Mode mode = income::Mode::decoupled_closed_form;
  C3Convention convention = C3Convention::empirical;
  bool include_state = true;  // false: only the two firms take part
  double refine_width = 1e-6;
};

struct GridPoint {
  double x = 0.0;
  income::IncomeReport income;
  double max_deviation = 0.0;
};

struct CompromiseResult {
  double x_star = 0.0;
  double max_deviation = 0.0;
  Triple deviations{};  // C_i - h_i(x_star)
  Triple c_values{};
  MaxIncomes maxima;
  income::IncomeReport income_at_star;
  std::size_t grid_index = 0;  // best grid point before refinement
  bool refined = false;        // true if refinement improved on the grid
  Options options;
  std::vector<GridPoint> sweep;
};

/// x_j = j / N for j = 0, ..., N - 1.
[[nodiscard]] inline std::vector<double> search_grid(std::size_t grid_size) {
  std::vector<double> xs(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    xs[j] = static_cast<double>(j) / static_cast<double>(grid_size);
  }
  return xs;
}

namespace detail {

inline void check_options(const Options& o) {
  if (o.grid_size < 11) throw validation_error("grid_size must be at least 11");
  if (!(o.refine_width > 0.0)) throw validation_error("refine_width must be positive");
}

inline income::IncomeReport evaluate_at(const Scenario& s, double x, income::Mode mode) {
  try {
    return income::evaluate(s, x, mode);
  } catch (const integration_error& e) {
    throw integration_error(e.error_kind(), std::string(e.what()) + " (tax rate x = " + std::to_string(x) + ")");
  }
}

inline double agent_income(const income::IncomeReport& r, std::size_t agent) {
  return agent == 0 ? r.h1 : agent == 1 ? r.h2 : r.h3;
}

inline double max_over(const Triple& d, bool include_state) {
  return include_state ? std::max({d[0], d[1], d[2]}) : std::max(d[0], d[1]);
}

inline std::vector<income::IncomeReport> evaluate_grid(const Scenario& s, const std::vector<double>& xs,
                                                       income::Mode mode) {
  std::vector<income::IncomeReport> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(evaluate_at(s, x, mode));
  return out;
}

inline MaxIncomes maxima_from_grid(const Scenario& s, const std::vector<double>& xs,
                                   const std::vector<income::IncomeReport>& grid, income::Mode mode,
                                   double refine_width) {
  MaxIncomes m;
  for (std::size_t agent = 0; agent < 3; ++agent) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < grid.size(); ++j) {
      if (agent_income(grid[j], agent) > agent_income(grid[best], agent)) best = j;
    }
    double value = agent_income(grid[best], agent);
    double where = xs[best];
    const double lo = xs[best == 0 ? 0 : best - 1];
    const double hi = xs[std::min(best + 1, xs.size() - 1)];
    const auto refined = optimize::golden_section_minimize(
        [&](double x) { return -agent_income(evaluate_at(s, x, mode), agent); }, lo, hi, refine_width);
    if (-refined.value > value) {
      value = -refined.value;
      where = refined.x;
    }
    m.empirical[agent] = value;
    m.argmax_empirical[agent] = where;
  }
  m.endpoint = {grid.front().h1, grid.front().h2, grid.back().h3};
  return m;
}

}  // namespace detail

/// Best achievable incomes (C1, C2, C3) under both conventions.
[[nodiscard]] inline MaxIncomes max_incomes(const Scenario& s, std::size_t grid_size, income::Mode mode) {
  detail::check_options(Options{grid_size});
  const auto xs = search_grid(grid_size);
  return detail::maxima_from_grid(s, xs, detail::evaluate_grid(s, xs, mode), mode, Options{}.refine_width);
}

/// Shortfalls C_i - h_i(x).
[[nodiscard]] inline Triple deviations(const Scenario& s, double x, const Triple& c_values, income::Mode mode) {
  const auto r = detail::evaluate_at(s, x, mode);
  return {c_values[0] - r.h1, c_values[1] - r.h2, c_values[2] - r.h3};
}

[[nodiscard]] inline CompromiseResult compromise_point(const Scenario& s, const Options& options = {}) {
  detail::check_options(options);
  validate(s);
  if (s.system == SystemKind::lotka_volterra) throw validation_error("compromise: not defined for lotka_volterra");

  const auto xs = search_grid(options.grid_size);
  const auto grid = detail::evaluate_grid(s, xs, options.mode);

  CompromiseResult result;
  result.options = options;
  result.maxima = detail::maxima_from_grid(s, xs, grid, options.mode, options.refine_width);
  result.c_values = result.maxima.values(options.convention);
  const Triple& c = result.c_values;

  auto devs_of = [&c](const income::IncomeReport& r) { return Triple{c[0] - r.h1, c[1] - r.h2, c[2] - r.h3}; };

  result.sweep.reserve(grid.size());
  std::size_t best = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double dev = detail::max_over(devs_of(grid[j]), options.include_state);
    result.sweep.push_back({xs[j], grid[j], dev});
    // Later points must win by more than 1e-12, so ties go to the smaller rate.
    if (dev < result.sweep[best].max_deviation - 1e-12) best = j;
  }
  result.grid_index = best;

  double x_star = xs[best];
  income::IncomeReport at_star = grid[best];
  const double lo = xs[best == 0 ? 0 : best - 1];
  const double hi = xs[std::min(best + 1, xs.size() - 1)];
  const auto refined = optimize::golden_section_minimize(
      [&](double x) {
        return detail::max_over(devs_of(detail::evaluate_at(s, x, options.mode)), options.include_state);
      },
      lo, hi, options.refine_width);
  if (refined.value < result.sweep[best].max_deviation) {
    x_star = refined.x;
    at_star = detail::evaluate_at(s, x_star, options.mode);
    result.refined = true;
  }

  result.x_star = x_star;
  result.income_at_star = at_star;
  result.deviations = devs_of(at_star);
  result.max_deviation = detail::max_over(result.deviations, options.include_state);
  return result;
}

}  // namespace duopoly::compromise
