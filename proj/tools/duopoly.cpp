// Command-line front end: simulate, compromise, sweep and analyze-lv.
//
// Exit codes: 0 ok, 1 usage, 2 validation, 3 integration, 4 analysis,
// 5 unreadable config file, 6 config parse error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "duopoly/config.hpp"
#include "duopoly/duopoly.hpp"

namespace {

using duopoly::config::json;

constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  ok = 0,
  usage = 1,
  validation = 2,
  integration = 3,
  analysis = 4,
  missing_file = 5,
  parse = 6,
};

struct CommonArgs {
  std::string config_path;
  std::string out;
  std::string report;
  std::string mode = "coupled";
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args, const std::string& default_out) {
  cmd->add_option("--config", args.config_path, "Scenario config file (JSON)")->required();
  args.out = default_out;
  cmd->add_option("--out", args.out, "CSV output path")->capture_default_str();
  cmd->add_option("--report", args.report, "Write the JSON report here instead of stdout");
  cmd->add_option("--mode", args.mode, "coupled | decoupled")
      ->check(CLI::IsMember({"coupled", "decoupled"}))
      ->capture_default_str();
  cmd->add_option("--set", args.overrides, "Override a config value, e.g. --set tax.x=0.3");
}

struct Loaded {
  duopoly::Scenario scenario;
  json document;
};

Loaded load(const CommonArgs& args) {
  json doc = duopoly::config::read_document(args.config_path);
  for (const auto& o : args.overrides) duopoly::config::apply_override(doc, o);
  auto scenario = duopoly::config::scenario_from_json(doc);
  return {scenario, duopoly::config::scenario_to_json(scenario)};
}

duopoly::income::Mode income_mode(const std::string& mode) {
  return mode == "coupled" ? duopoly::income::Mode::coupled_numeric : duopoly::income::Mode::decoupled_closed_form;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw duopoly::validation_error("cannot write output file '" + path + "'");
  return out;
}

void emit_report(const CommonArgs& args, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (args.report.empty()) {
    std::cout << text;
  } else {
    open_output(args.report) << text;
  }
}

json command_echo(const std::string& name, const CommonArgs& args) {
  return {{"name", name},
          {"config", args.config_path},
          {"mode", args.mode},
          {"out", args.out},
          {"set", args.overrides}};
}

json state_json(const duopoly::State& v) { return json::array({v[0], v[1]}); }

const char* event_name(duopoly::ode::EventKind k) {
  return k == duopoly::ode::EventKind::extinction_firm1 ? "extinction_firm1" : "extinction_firm2";
}

json trajectory_summary(const duopoly::ode::Trajectory& traj, const std::string& path) {
  json events = json::array();
  for (const auto& e : traj.events) events.push_back({{"t", e.t}, {"kind", event_name(e.kind)}});
  return {{"trajectory", path},
          {"samples", traj.samples.size()},
          {"final_state", state_json(traj.samples.back().v)},
          {"events", events}};
}

json income_json(const duopoly::income::IncomeReport& r) {
  return {{"x", r.x},   {"mode", std::string(duopoly::income::to_string(r.mode))},
          {"h1", r.h1}, {"h2", r.h2},
          {"h3", r.h3}, {"total", r.total}};
}

int run_simulate(const CommonArgs& args, json& report) {
  auto [scenario, echo] = load(args);
  scenario.coupling = args.mode == "coupled" ? duopoly::Coupling::coupled : duopoly::Coupling::decoupled;
  duopoly::validate(scenario);
  const auto traj = duopoly::ode::integrate(scenario);
  auto out = open_output(args.out);
  duopoly::csv::write_trajectory(out, traj);
  report["scenario"] = echo;
  report["results"] = trajectory_summary(traj, args.out);
  report["results"]["coupling"] = std::string(duopoly::to_string(scenario.coupling));
  return ExitCode::ok;
}

int run_compromise(const CommonArgs& args, std::size_t grid, bool no_state, const std::string& convention,
                   json& report) {
  const auto [scenario, echo] = load(args);
  duopoly::compromise::Options options;
  options.grid_size = grid;
  options.mode = income_mode(args.mode);
  options.include_state = !no_state;
  options.convention = convention == "endpoint" ? duopoly::compromise::C3Convention::endpoint
                                                : duopoly::compromise::C3Convention::empirical;
  const auto r = duopoly::compromise::compromise_point(scenario, options);

  auto out = open_output(args.out);
  duopoly::csv::write_compromise_sweep(out, r.sweep);

  const auto& m = r.maxima;
  report["scenario"] = echo;
  report["results"] = {
      {"x_star", r.x_star},
      {"max_deviation", r.max_deviation},
      {"deviations", {{"firm1", r.deviations[0]}, {"firm2", r.deviations[1]}, {"state", r.deviations[2]}}},
      {"c_values", {{"C1", r.c_values[0]}, {"C2", r.c_values[1]}, {"C3", r.c_values[2]}}},
      {"c_convention", std::string(duopoly::compromise::to_string(options.convention))},
      {"c3_empirical", m.empirical[2]},
      {"c3_empirical_at_x", m.argmax_empirical[2]},
      {"c3_endpoint", m.endpoint[2]},
      {"include_state", options.include_state},
      {"mode", std::string(duopoly::income::to_string(options.mode))},
      {"grid",
       {{"size", options.grid_size},
        {"domain", json::array({0.0, r.sweep.back().x})},
        {"best_index", r.grid_index},
        {"refined", r.refined},
        {"refine_width", options.refine_width}}},
      {"income_at_x_star", income_json(r.income_at_star)},
      {"sweep_csv", args.out},
  };
  return ExitCode::ok;
}

int run_sweep(const CommonArgs& args, const std::string& param, double from, double to, int steps, json& report) {
  const auto [scenario, echo] = load(args);
  if (param != "x") throw duopoly::validation_error("sweep: unsupported parameter '" + param + "' (only x)");
  if (steps < 1) throw duopoly::validation_error("sweep: --steps must be at least 1");
  if (!(from < to)) throw duopoly::validation_error("sweep: invalid range, --from must be below --to");
  if (!(from >= 0.0 && to < 1.0)) throw duopoly::validation_error("sweep: x range must lie within [0,1)");
  if (scenario.system == duopoly::SystemKind::lotka_volterra) {
    throw duopoly::validation_error("sweep: not defined for lotka_volterra");
  }

  const auto mode = income_mode(args.mode);
  std::vector<duopoly::income::IncomeReport> rows;
  rows.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double x = steps == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
    rows.push_back(duopoly::income::evaluate(scenario, x, mode));
  }
  auto out = open_output(args.out);
  duopoly::csv::write_income_sweep(out, rows);

  report["scenario"] = echo;
  json incomes = json::array();
  for (const auto& r : rows) incomes.push_back(income_json(r));
  report["results"] = {{"csv", args.out},
                       {"param", param},
                       {"rows", rows.size()},
                       {"mode", std::string(duopoly::income::to_string(mode))},
                       {"incomes", incomes}};
  return ExitCode::ok;
}

int run_analyze_lv(const CommonArgs& args, bool write_csv, json& report) {
  const auto [scenario, echo] = load(args);
  const auto a = duopoly::lv::analyze(scenario);
  if (write_csv) {
    auto out = open_output(args.out);
    duopoly::csv::write_trajectory(out, a.trajectory);
  }
  report["scenario"] = echo;
  report["results"] = {
      {"equilibrium", state_json(a.equilibrium)},
      {"first_integral", a.x_invariant},
      {"first_integral_drift", a.max_drift},
      {"period", a.period ? json(*a.period) : json("at equilibrium")},
      {"time_averages", state_json(a.averages)},
  };
  if (write_csv) report["results"]["trajectory"] = args.out;
  return ExitCode::ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-firm capital dynamics with taxation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonArgs sim_args, comp_args, sweep_args, lv_args;

  auto* simulate = app.add_subcommand("simulate", "Integrate the scenario and write a t,V1,V2 CSV");
  add_common(simulate, sim_args, "trajectory.csv");

  auto* compromise = app.add_subcommand("compromise", "Find the compromise tax rate");
  add_common(compromise, comp_args, "compromise_sweep.csv");
  std::size_t grid = 101;
  bool no_state = false;
  std::string convention = "empirical";
  compromise->add_option("--grid", grid, "Grid size N; rates j/N for j < N")->capture_default_str();
  compromise->add_flag("--no-state", no_state, "Leave the state out of the compromise (firms only)");
  compromise->add_option("--c-convention", convention, "empirical | endpoint")
      ->check(CLI::IsMember({"empirical", "endpoint"}))
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Tabulate incomes over a range of tax rates");
  add_common(sweep, sweep_args, "sweep.csv");
  std::string param = "x";
  double from = 0.0, to = 0.9;
  int steps = 10;
  sweep->add_option("--param", param, "Swept parameter (x)")->capture_default_str();
  sweep->add_option("--from", from, "First value")->capture_default_str();
  sweep->add_option("--to", to, "Last value")->capture_default_str();
  sweep->add_option("--steps", steps, "Number of grid points")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze-lv", "Equilibrium, first integral, period and time averages");
  add_common(analyze, lv_args, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ExitCode::ok : ExitCode::usage;
  }

  const auto start = std::chrono::steady_clock::now();
  json report;
  report["tool"] = {{"name", "duopoly"}, {"version", kVersion}};
  const CommonArgs* active = nullptr;
  try {
    int rc = ExitCode::ok;
    if (*simulate) {
      active = &sim_args;
      report["command"] = command_echo("simulate", sim_args);
      rc = run_simulate(sim_args, report);
    } else if (*compromise) {
      active = &comp_args;
      report["command"] = command_echo("compromise", comp_args);
      report["command"]["grid"] = grid;
      report["command"]["no_state"] = no_state;
      report["command"]["c_convention"] = convention;
      rc = run_compromise(comp_args, grid, no_state, convention, report);
    } else if (*sweep) {
      active = &sweep_args;
      report["command"] = command_echo("sweep", sweep_args);
      report["command"]["param"] = param;
      report["command"]["from"] = from;
      report["command"]["to"] = to;
      report["command"]["steps"] = steps;
      rc = run_sweep(sweep_args, param, from, to, steps, report);
    } else {
      active = &lv_args;
      report["command"] = command_echo("analyze-lv", lv_args);
      rc = run_analyze_lv(lv_args, !lv_args.out.empty(), report);
    }
    report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_report(*active, report);
    return rc;
  } catch (const duopoly::config::file_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCode::missing_file;
  } catch (const duopoly::config::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCode::parse;
  } catch (const duopoly::validation_error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return ExitCode::validation;
  } catch (const duopoly::integration_error& e) {
    std::cerr << "integration error: " << e.what() << '\n';
    return ExitCode::integration;
  } catch (const duopoly::analysis_error& e) {
    std::cerr << "analysis error: " << e.what() << '\n';
    if (e.error_kind() == duopoly::analysis_error::kind::no_return_found) {
      std::cerr << "hint: increase 'horizon' to cover at least three oscillation periods\n";
    }
    return ExitCode::analysis;
  }
}
