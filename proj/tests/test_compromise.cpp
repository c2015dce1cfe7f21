#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "duopoly/compromise.hpp"
#include "duopoly/csv.hpp"
#include "support/scenarios.hpp"

using namespace duopoly;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Scenario& benchmark() {
  static const Scenario s = testing::symmetric(1.0, 1.0, 0.5, 10.0);
  return s;
}

}  // namespace

TEST_CASE("search grid", "[compromise]") {
  const auto xs = compromise::search_grid(101);
  REQUIRE(xs.size() == 101);
  CHECK(xs.front() == 0.0);
  CHECK(xs[50] == 50.0 / 101.0);
  CHECK(xs.back() == 100.0 / 101.0);
  CHECK(xs.back() < 1.0);
}

TEST_CASE("benchmark compromise rate", "[compromise]") {
  const auto r = compromise::compromise_point(benchmark());
  CHECK_THAT(r.x_star, WithinAbs(0.21412, 1e-4));
  CHECK_THAT(r.c_values[0], WithinRel(9.306898218339272, 1e-12));
  CHECK(r.c_values[0] == r.c_values[1]);
  CHECK_THAT(r.c_values[2], WithinAbs(5.07195, 1e-4));
  CHECK_THAT(r.maxima.argmax_empirical[2], WithinAbs(0.574, 2e-3));
  CHECK_THAT(r.deviations[0], WithinAbs(r.deviations[1], 1e-9));
  // At the minimax point the firms' and the state's shortfalls balance.
  CHECK_THAT(r.deviations[0], WithinAbs(r.deviations[2], 1e-5));
  CHECK(r.max_deviation <= r.sweep[r.grid_index].max_deviation);
  CHECK(r.sweep.size() == 101);
}

TEST_CASE("minimax optimality against the sweep", "[compromise][property]") {
  testing::Generator gen(55);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario s = gen.decoupled_taxed();
    const auto r = compromise::compromise_point(s);
    for (const auto& p : r.sweep) CHECK(r.max_deviation <= p.max_deviation + 1e-12);
    CHECK(r.x_star >= 0.0);
    CHECK(r.x_star < 1.0);
    for (double d : r.deviations) CHECK(d >= -1e-9);
  }
}

TEST_CASE("empirical maxima dominate the endpoint convention for the state", "[compromise]") {
  const auto m = compromise::max_incomes(benchmark(), 101, income::Mode::decoupled_closed_form);
  CHECK(m.empirical[0] == m.endpoint[0]);
  CHECK(m.empirical[1] == m.endpoint[1]);
  CHECK(m.empirical[2] > m.endpoint[2]);
  CHECK(m.argmax_empirical[0] == 0.0);
}

TEST_CASE("endpoint convention", "[compromise]") {
  compromise::Options o;
  o.convention = compromise::C3Convention::endpoint;
  const auto r = compromise::compromise_point(benchmark(), o);
  const auto top = income::evaluate(benchmark(), 100.0 / 101.0, income::Mode::decoupled_closed_form);
  CHECK(r.c_values[2] == top.h3);
  CHECK(r.x_star > 0.0);
  CHECK(r.x_star < 1.0);
}

TEST_CASE("firms alone prefer no tax", "[compromise]") {
  compromise::Options o;
  o.include_state = false;
  const auto r = compromise::compromise_point(benchmark(), o);
  CHECK(r.x_star == 0.0);
  CHECK(r.max_deviation == 0.0);
  CHECK_FALSE(r.refined);
}

TEST_CASE("grid refinement changes the rate only slightly", "[compromise]") {
  compromise::Options coarse;
  compromise::Options fine;
  fine.grid_size = 201;
  const double a = compromise::compromise_point(benchmark(), coarse).x_star;
  const double b = compromise::compromise_point(benchmark(), fine).x_star;
  CHECK(std::abs(a - b) < 0.02);
}

TEST_CASE("coupled mode", "[compromise]") {
  compromise::Options o;
  o.mode = income::Mode::coupled_numeric;
  o.grid_size = 21;
  const auto r = compromise::compromise_point(benchmark(), o);
  CHECK(r.x_star > 0.0);
  CHECK(r.x_star < 1.0);
  CHECK(r.income_at_star.mode == income::Mode::coupled_numeric);
  CHECK_THAT(r.deviations[0], WithinAbs(r.deviations[1], 1e-9));
}

TEST_CASE("compromise input checks", "[compromise]") {
  compromise::Options o;
  o.grid_size = 10;
  CHECK_THROWS_AS(compromise::compromise_point(benchmark(), o), validation_error);
  Scenario lv = benchmark();
  lv.system = SystemKind::lotka_volterra;
  CHECK_THROWS_AS(compromise::compromise_point(lv), validation_error);
}

TEST_CASE("compromise sweep CSV", "[compromise][csv]") {
  compromise::Options o;
  o.grid_size = 11;
  const auto r = compromise::compromise_point(benchmark(), o);
  std::ostringstream os;
  csv::write_compromise_sweep(os, r.sweep);
  const std::string text = os.str();
  CHECK(text.rfind("x,h1,h2,h3,maxdev\n0,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 12);
}
