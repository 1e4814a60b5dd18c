// Command-line front end: dispatch, lifecycle, sweep, emit-figures and
// validate-config over one JSON run configuration.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "stackopt/config.hpp"
#include "stackopt/error.hpp"
#include "stackopt/lifecycle.hpp"
#include "stackopt/report.hpp"
#include "stackopt/sweep.hpp"

namespace fs = std::filesystem;
using namespace stackopt;

namespace {

// Command-line overrides; unset options keep the config file's value.
struct Overrides {
  std::string config_path;
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> j_points;
  std::optional<std::string> scenario;
  std::optional<double> alpha;
  std::optional<double> threshold;
  std::optional<std::size_t> max_years;
  std::optional<double> capex;
  std::optional<double> sale_price;
  std::optional<std::string> lower_bound;
  std::optional<std::string> lcoh_mode;
  std::optional<std::string> output_dir;
  std::optional<std::size_t> parallel;
  std::optional<std::string> solver_command;
  bool allow_arbitrage = false;
  bool purchase = false;
  bool no_storage = false;
  bool operating_hours_only = false;
  bool quiet = false;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config_path, "Run configuration (JSON); defaults to $STACKOPT_CONFIG or "
                                                "config/default_config.json");
  app->add_option("--horizon", o.horizon, "Dispatch horizon in steps");
  app->add_option("--j-points", o.j_points, "Linearization grid points");
  app->add_option("--scenario", o.scenario, "Degradation preset");
  app->add_option("--alpha", o.alpha, "Shift share of the voltage surcharge");
  app->add_option("--threshold", o.threshold, "End-of-life threshold R in %");
  app->add_option("--max-years", o.max_years, "Upper bound on simulated years");
  app->add_option("--capex", o.capex, "Electrolyzer CAPEX in EUR/kW");
  app->add_option("--sale-price", o.sale_price, "Surplus sale price in EUR/kWh");
  app->add_option("--lower-bound", o.lower_bound, "Lower-bound mode: current, literal or off");
  app->add_option("--lcoh-mode", o.lcoh_mode, "averaged or literal_sum");
  app->add_option("-o,--output-dir", o.output_dir, "Directory for output files");
  app->add_option("--parallel", o.parallel, "Worker threads for sweeps (0: all cores)");
  app->add_option("--solver-command", o.solver_command, "External LP solver command with {in} and {out}");
  app->add_flag("--allow-arbitrage", o.allow_arbitrage, "Skip the surplus-price validator");
  app->add_flag("--grid-purchase", o.purchase, "Allow buying grid power");
  app->add_flag("--no-storage", o.no_storage, "Disable hydrogen storage");
  app->add_flag("--operating-hours-only", o.operating_hours_only, "Degrade only while the stack runs");
  app->add_flag("-q,--quiet", o.quiet, "Suppress progress output");
}

RunConfig resolve(const Overrides& o) {
  const fs::path path = o.config_path.empty() ? default_config_path() : fs::path(o.config_path);
  RunConfig c = load_config(path);
  if (o.horizon) c.horizon = *o.horizon;
  if (o.j_points) c.electrolyzer.j_points = *o.j_points;
  if (o.scenario) {
    c.scenario = *o.scenario;
    c.custom_scenario.reset();
  }
  if (o.alpha) c.alpha = *o.alpha;
  if (o.threshold) c.threshold = *o.threshold;
  if (o.max_years) c.max_years = *o.max_years;
  if (o.capex) c.economics.capex = *o.capex;
  if (o.sale_price) c.grid.sale_price = *o.sale_price;
  if (o.lower_bound) {
    if (*o.lower_bound == "current") c.lower_bound_mode = LowerBoundMode::Current;
    else if (*o.lower_bound == "literal") c.lower_bound_mode = LowerBoundMode::Literal;
    else if (*o.lower_bound == "off") c.lower_bound_mode = LowerBoundMode::Off;
    else throw Error(ErrorKind::Config, "--lower-bound: expected current, literal or off");
  }
  if (o.lcoh_mode) {
    if (*o.lcoh_mode == "averaged") c.lcoh_mode = LcohMode::Averaged;
    else if (*o.lcoh_mode == "literal_sum") c.lcoh_mode = LcohMode::LiteralSum;
    else throw Error(ErrorKind::Config, "--lcoh-mode: expected averaged or literal_sum");
  }
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.parallel) c.sweep.parallelism = *o.parallel;
  if (o.solver_command) {
    c.solver.kind = "external";
    c.solver.command = *o.solver_command;
  }
  if (o.allow_arbitrage) c.grid.allow_arbitrage = true;
  if (o.purchase) c.grid.purchase_enabled = true;
  if (o.no_storage) c.storage.enabled = false;
  if (o.operating_hours_only) c.operating_hours_only = true;
  c.validate();
  return c;
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::FileNotFound, "cannot write " + path.string());
  return f;
}

void note(const Overrides& o, const std::string& line) {
  if (!o.quiet) std::cerr << line << '\n';
}

int cmd_dispatch(const Overrides& o, std::size_t year) {
  const RunConfig rc = resolve(o);
  const LifecycleConfig lc = build_lifecycle_config(rc);
  const auto scenario = resolve_scenario(rc);
  const auto solver = make_solver(rc);
  if (year == 0) throw Error(ErrorKind::Config, "--year must be >= 1");
  auto state = DegradationState::fresh(rc.electrolyzer.j_points);
  for (std::size_t k = 1; k < year; ++k) {
    state = year_step(state, lc, scenario, *solver).next;
    note(o, "degraded through year " + std::to_string(k));
  }
  DispatchSolution sol;
  const auto step = year_step(state, lc, scenario, *solver, &sol);
  auto hourly = open_output(rc.output_dir / "dispatch.csv");
  write_dispatch_csv(hourly, sol);
  auto summary = open_output(rc.output_dir / "dispatch_summary.csv");
  write_dispatch_summary(summary, sol);
  note(o, "year " + std::to_string(year) + ": objective " + format_number(sol.objective) + " EUR, R at start " +
              format_number(step.result.r_start_percent) + " %");
  return 0;
}

int cmd_lifecycle(const Overrides& o) {
  const RunConfig rc = resolve(o);
  const LifecycleConfig lc = build_lifecycle_config(rc);
  const auto scenario = resolve_scenario(rc);
  const auto solver = make_solver(rc);
  const auto result = simulate_lifecycle(lc, scenario, rc.threshold, *solver);
  auto years = open_output(rc.output_dir / "lifecycle.csv");
  write_lifecycle_csv(years, result);
  auto summary = open_output(rc.output_dir / "lifecycle_summary.csv");
  write_lifecycle_summary(summary, result);
  note(o, "eol " + std::to_string(result.eol_years) + " years, LCOH " + format_number(result.lcoh.lcoh_av) + " EUR/kg");
  return 0;
}

int cmd_sweep(const Overrides& o, bool figures) {
  const RunConfig rc = resolve(o);
  const LifecycleConfig lc = build_lifecycle_config(rc);
  const auto solver = make_solver(rc);
  const auto table = sweep_grid(lc, rc.sweep, *solver);
  auto out = open_output(rc.output_dir / "sweep.csv");
  write_sweep_csv(out, table);
  auto optima = open_output(rc.output_dir / "sweep_optima.csv");
  write_optima_csv(optima, table);
  for (const auto& c : table.curves) {
    if (c.optimum) {
      note(o, c.scenario + " alpha=" + format_number(c.alpha) + " capex=" + format_number(c.capex) + ": R*=" +
                  format_number(c.optimum->threshold) + " % eol*=" + std::to_string(c.optimum->eol_years) +
                  " lcoh*=" + format_number(c.optimum->lcoh));
    } else {
      note(o, c.scenario + " alpha=" + format_number(c.alpha) + " capex=" + format_number(c.capex) + ": unreachable");
    }
  }
  if (figures) {
    for (const auto& p : emit_figures(lc, rc.sweep, rc.output_dir / "figures", *solver)) note(o, "wrote " + p.string());
  }
  return 0;
}

int cmd_emit_figures(const Overrides& o) {
  const RunConfig rc = resolve(o);
  const LifecycleConfig lc = build_lifecycle_config(rc);
  const auto solver = make_solver(rc);
  for (const auto& p : emit_figures(lc, rc.sweep, rc.output_dir / "figures", *solver)) note(o, "wrote " + p.string());
  return 0;
}

int cmd_validate(const Overrides& o, bool print) {
  const RunConfig rc = resolve(o);
  build_lifecycle_config(rc);
  if (print) std::cout << config_to_json(rc);
  else std::cout << "ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-optimal electrolyzer stack replacement: dispatch, lifecycle and sweep runs"};
  app.require_subcommand(1);
  Overrides o;

  std::size_t year = 1;
  auto* dispatch = app.add_subcommand("dispatch", "Solve one annual dispatch and write hourly flows");
  add_common(dispatch, o);
  dispatch->add_option("--year", year, "Operating year whose degraded curve is used (1 = new stack)");

  auto* lifecycle = app.add_subcommand("lifecycle", "Simulate years until the end-of-life threshold");
  add_common(lifecycle, o);

  bool figures = false;
  auto* sweep = app.add_subcommand("sweep", "Evaluate the configured threshold/CAPEX/alpha/scenario grid");
  add_common(sweep, o);
  sweep->add_flag("--figures", figures, "Also write the per-figure CSV bundle");

  auto* emit = app.add_subcommand("emit-figures", "Write per-figure CSV bundles");
  add_common(emit, o);

  bool print = false;
  auto* validate = app.add_subcommand("validate-config", "Check a configuration and its referenced files");
  add_common(validate, o);
  validate->add_flag("--print", print, "Print the normalized configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*dispatch) return cmd_dispatch(o, year);
    if (*lifecycle) return cmd_lifecycle(o);
    if (*sweep) return cmd_sweep(o, figures);
    if (*emit) return cmd_emit_figures(o);
    if (*validate) return cmd_validate(o, print);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  }
  return 0;
}
