#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "duopoly/golden_section.hpp"
#include "duopoly/quadrature.hpp"

using namespace duopoly;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("simpson integrates cubics exactly", "[numerics]") {
  auto cubic = [](double t) { return 2.0 * t * t * t - t + 3.0; };
  // Antiderivative t^4 / 2 - t^2 / 2 + 3 t on [0, 2].
  CHECK_THAT(quadrature::simpson(cubic, 0.0, 2.0, 2), WithinRel(12.0, 1e-15));
  for (std::size_t n : {4u, 5u, 6u, 7u, 10u}) {
    std::vector<double> f(n + 1);
    for (std::size_t k = 0; k <= n; ++k) f[k] = cubic(2.0 * static_cast<double>(k) / static_cast<double>(n));
    CHECK_THAT(quadrature::simpson(f, 2.0 / static_cast<double>(n)), WithinRel(12.0, 1e-14));
  }
}

TEST_CASE("simpson converges at fourth order", "[numerics]") {
  auto f = [](double t) { return std::exp(std::sin(t)); };
  const double exact = quadrature::simpson(f, 0.0, 1.0, 4096);
  const double e1 = std::abs(quadrature::simpson(f, 0.0, 1.0, 16) - exact);
  const double e2 = std::abs(quadrature::simpson(f, 0.0, 1.0, 32) - exact);
  CHECK_THAT(e1 / e2, WithinRel(16.0, 0.1));
}

TEST_CASE("simpson edge cases", "[numerics]") {
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 3.0};
  CHECK(quadrature::simpson(one, 0.5) == 0.0);
  CHECK(quadrature::simpson(two, 0.5) == 1.0);
  const std::vector<double> flat(9, 2.5);
  CHECK_THAT(quadrature::simpson(flat, 0.25), WithinRel(5.0, 1e-15));
  auto id = [](double t) { return t; };
  CHECK_THROWS_AS(quadrature::simpson(id, 0.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("golden section", "[numerics]") {
  SECTION("quadratic") {
    const auto m = optimize::golden_section_minimize([](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-8);
    CHECK_THAT(m.x, WithinAbs(0.3, 1e-7));
    CHECK(m.evaluations > 10);
  }
  SECTION("minimum at the left end") {
    const auto m = optimize::golden_section_minimize([](double x) { return x; }, 0.0, 1.0);
    CHECK(m.x == 0.0);
    CHECK(m.value == 0.0);
  }
  SECTION("kink") {
    const auto m = optimize::golden_section_minimize([](double x) { return std::abs(x - 0.7); }, 0.2, 1.0, 1e-9);
    CHECK_THAT(m.x, WithinAbs(0.7, 1e-8));
  }
  SECTION("flat function keeps the left end") {
    const auto m = optimize::golden_section_minimize([](double) { return 1.0; }, 0.1, 0.9);
    CHECK(m.x == 0.1);
  }
  SECTION("cosine") {
    const auto m = optimize::golden_section_minimize([](double x) { return std::cos(x); }, 2.0, 4.0, 1e-9);
    CHECK_THAT(m.x, WithinAbs(std::numbers::pi, 1e-8));
  }
}
