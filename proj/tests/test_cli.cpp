#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "duopoly/config.hpp"
#include "support/cli.hpp"

using namespace duopoly::testing;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using duopoly::config::json;

namespace {

std::vector<std::vector<double>> read_csv(const std::string& path, std::string& header) {
  std::istringstream in(slurp(path));
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::istringstream cells(line);
    for (std::string cell; std::getline(cells, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

json results_of(const CliResult& r) { return json::parse(r.out).at("results"); }

}  // namespace

TEST_CASE("simulate writes a trajectory and a report", "[cli]") {
  const auto csv = scratch("sym.csv");
  const auto r = run_cli("simulate --config '" + fixture("symmetric_notax.json") + "' --out '" + csv + "'");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report.at("command").at("name") == "simulate");
  CHECK(report.at("scenario").at("system") == "competing");
  CHECK(report.contains("wall_time_s"));

  std::string header;
  const auto rows = read_csv(csv, header);
  CHECK(header == "t,V1,V2");
  REQUIRE(rows.size() == 1001);
  CHECK(rows.front()[0] == 0.0);
  CHECK(rows.back()[0] == 10.0);
  for (const auto& row : rows) CHECK(row[1] == row[2]);
  // Symmetric firms share the logistic limit 1/2.
  CHECK_THAT(rows.back()[1], WithinRel(0.5, 1e-8));
}

TEST_CASE("simulate is deterministic", "[cli]") {
  const auto a = scratch("det_a.csv");
  const auto b = scratch("det_b.csv");
  const std::string cfg = " --config '" + fixture("taxed_benchmark.json") + "' --mode decoupled";
  const auto ra = run_cli("simulate" + cfg + " --out '" + a + "'");
  const auto rb = run_cli("simulate" + cfg + " --out '" + b + "'");
  REQUIRE(ra.exit_code == 0);
  REQUIRE(rb.exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(results_of(ra).at("final_state") == results_of(rb).at("final_state"));
}

TEST_CASE("compromise command", "[cli]") {
  const std::string cfg = " --config '" + fixture("taxed_benchmark.json") + "' --mode decoupled";
  SECTION("benchmark rate and sweep") {
    const auto csv = scratch("comp.csv");
    const auto r = run_cli("compromise" + cfg + " --out '" + csv + "'");
    REQUIRE(r.exit_code == 0);
    const json res = results_of(r);
    CHECK_THAT(res.at("x_star").get<double>(), WithinAbs(0.21412, 1e-4));
    CHECK(res.at("mode") == "decoupled-closed-form");
    CHECK(res.at("c_convention") == "empirical");
    std::string header;
    const auto rows = read_csv(csv, header);
    CHECK(header == "x,h1,h2,h3,maxdev");
    CHECK(rows.size() == 101);
  }
  SECTION("firms only") {
    const auto r = run_cli("compromise" + cfg + " --no-state --out '" + scratch("nostate.csv") + "'");
    REQUIRE(r.exit_code == 0);
    CHECK(results_of(r).at("x_star") == 0.0);
  }
  SECTION("finer grid") {
    const auto a = run_cli("compromise" + cfg + " --grid 101 --out '" + scratch("g101.csv") + "'");
    const auto b = run_cli("compromise" + cfg + " --grid 201 --out '" + scratch("g201.csv") + "'");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    const double xa = results_of(a).at("x_star").get<double>();
    const double xb = results_of(b).at("x_star").get<double>();
    CHECK(std::abs(xa - xb) < 0.02);
  }
  SECTION("grid too small") {
    CHECK(run_cli("compromise" + cfg + " --grid 5 --out '" + scratch("g5.csv") + "'").exit_code == 2);
  }
}

TEST_CASE("sweep command", "[cli]") {
  const auto csv = scratch("sweep.csv");
  const auto r = run_cli("sweep --config '" + fixture("taxed_benchmark.json") +
                         "' --mode decoupled --from 0 --to 0.5 --steps 6 --out '" + csv + "'");
  REQUIRE(r.exit_code == 0);
  std::string header;
  const auto rows = read_csv(csv, header);
  CHECK(header == "x,h1,h2,h3,total");
  REQUIRE(rows.size() == 6);
  CHECK(rows[0][0] == 0.0);
  CHECK(rows[5][0] == 0.5);
  CHECK_THAT(rows[5][1], WithinRel(5.0, 1e-12));
  CHECK_THAT(rows[5][4], WithinRel(15.0, 1e-12));

  CHECK(run_cli("sweep --config '" + fixture("taxed_benchmark.json") + "' --to 1.0 --out '" + csv + "'").exit_code ==
        2);
  CHECK(run_cli("sweep --config '" + fixture("taxed_benchmark.json") + "' --param rho --out '" + csv + "'")
            .exit_code == 2);
}

TEST_CASE("sweep edge cases", "[cli]") {
  const std::string cfg = " --config '" + fixture("taxed_benchmark.json") + "'";
  SECTION("single step") {
    const auto csv = scratch("one.csv");
    REQUIRE(run_cli("sweep" + cfg + " --from 0.3 --to 0.6 --steps 1 --out '" + csv + "'").exit_code == 0);
    std::string header;
    const auto rows = read_csv(csv, header);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0] == 0.3);
  }
  SECTION("income shape in decoupled mode") {
    const auto csv = scratch("shape.csv");
    const auto r = run_cli("sweep" + cfg + " --mode decoupled --from 0 --to 0.9 --steps 10 --out '" + csv + "'");
    REQUIRE(r.exit_code == 0);
    CHECK(results_of(r).at("incomes").size() == 10);
    std::string header;
    const auto rows = read_csv(csv, header);
    CHECK(rows[0][3] == 0.0);
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k][1] <= rows[k - 1][1]);
  }
  SECTION("inverted range") {
    CHECK(run_cli("sweep" + cfg + " --from 0.5 --to 0.2 --out '" + scratch("inv.csv") + "'").exit_code == 2);
  }
}

TEST_CASE("reports are internally consistent and reproducible", "[cli]") {
  SECTION("compromise deviations") {
    const auto r = run_cli("compromise --config '" + fixture("taxed_benchmark.json") + "' --mode decoupled --out '" +
                           scratch("cons.csv") + "'");
    REQUIRE(r.exit_code == 0);
    const json res = results_of(r);
    const json& d = res.at("deviations");
    const double largest = std::max({d.at("firm1").get<double>(), d.at("firm2").get<double>(),
                                     d.at("state").get<double>()});
    CHECK(largest == res.at("max_deviation").get<double>());
  }
  SECTION("echoed scenario reproduces the run") {
    const auto first_csv = scratch("echo_a.csv");
    const auto second_csv = scratch("echo_b.csv");
    const auto first =
        run_cli("simulate --config '" + fixture("lv_orbit.json") + "' --set horizon=12 --out '" + first_csv + "'");
    REQUIRE(first.exit_code == 0);
    const auto echo_path = scratch("echo.json");
    std::ofstream(echo_path) << json::parse(first.out).at("scenario").dump();
    REQUIRE(run_cli("simulate --config '" + echo_path + "' --out '" + second_csv + "'").exit_code == 0);
    CHECK(slurp(first_csv) == slurp(second_csv));
  }
  SECTION("lotka-volterra equilibrium gives constant columns") {
    const auto csv = scratch("lv_eq.csv");
    REQUIRE(run_cli("simulate --config '" + fixture("lv_equilibrium.json") + "' --out '" + csv + "'").exit_code == 0);
    std::string header;
    for (const auto& row : read_csv(csv, header)) {
      CHECK(row[1] == 1.0);
      CHECK(row[2] == 1.0);
    }
  }
}

TEST_CASE("analyze-lv command", "[cli]") {
  SECTION("closed orbit") {
    const auto r = run_cli("analyze-lv --config '" + fixture("lv_orbit.json") + "'");
    REQUIRE(r.exit_code == 0);
    const json res = results_of(r);
    CHECK_THAT(res.at("period").get<double>(), WithinRel(2.0 * std::numbers::pi, 0.01));
    CHECK_THAT(res.at("time_averages")[0].get<double>(), WithinRel(1.0, 1e-4));
    CHECK_THAT(res.at("time_averages")[1].get<double>(), WithinRel(1.0, 1e-4));
    CHECK(res.at("first_integral_drift").get<double>() < 1e-6);
  }
  SECTION("at equilibrium") {
    const auto r = run_cli("analyze-lv --config '" + fixture("lv_equilibrium.json") + "'");
    REQUIRE(r.exit_code == 0);
    const json res = results_of(r);
    CHECK(res.at("period") == "at equilibrium");
    CHECK(res.at("time_averages") == json::array({1.0, 1.0}));
  }
  SECTION("horizon too short") {
    const auto r = run_cli("analyze-lv --config '" + fixture("lv_short.json") + "'");
    CHECK(r.exit_code == 4);
    CHECK_THAT(r.err, ContainsSubstring("horizon"));
  }
  SECTION("trajectory output") {
    const auto csv = scratch("lv.csv");
    REQUIRE(run_cli("analyze-lv --config '" + fixture("lv_orbit.json") + "' --out '" + csv + "'").exit_code == 0);
    std::string header;
    CHECK(read_csv(csv, header).size() == 1001);
  }
}

TEST_CASE("exit codes", "[cli]") {
  const auto out = " --out '" + scratch("ignored.csv") + "'";
  SECTION("invalid tax rate") {
    const auto r = run_cli("simulate --config '" + fixture("invalid_rate.json") + "'" + out);
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, ContainsSubstring("x out of [0,1)"));
  }
  SECTION("override to an invalid rate") {
    const auto r = run_cli("simulate --config '" + fixture("taxed_benchmark.json") + "' --set tax.x=1.0" + out);
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, ContainsSubstring("x out of [0,1)"));
  }
  SECTION("override within range") {
    const auto r = run_cli("simulate --config '" + fixture("taxed_benchmark.json") + "' --set tax.x=0.4" + out);
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out).at("scenario").at("tax").at("x") == 0.4);
  }
  SECTION("stiff scenario exhausts the step size") {
    const auto r = run_cli("simulate --config '" + fixture("taxed_benchmark.json") + "' --set firm1.rho=1e15" + out);
    CHECK(r.exit_code == 3);
    CHECK_THAT(r.err, ContainsSubstring("underflow"));
  }
  SECTION("step limit below the underflow threshold") {
    const auto r =
        run_cli("simulate --config '" + fixture("taxed_benchmark.json") + "' --set solver.max_step=1e-16" + out);
    CHECK(r.exit_code == 2);
  }
  SECTION("usage") {
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("simulate").exit_code == 1);
    CHECK(run_cli("simulate --config x --mode sideways").exit_code == 1);
  }
  SECTION("missing and malformed config") {
    CHECK(run_cli("simulate --config /nonexistent.json" + out).exit_code == 5);
    CHECK(run_cli("simulate --config '" + fixture("malformed.json") + "'" + out).exit_code == 6);
  }
}
