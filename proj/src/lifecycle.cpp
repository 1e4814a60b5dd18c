#include "stackopt/lifecycle.hpp"

#include <cmath>
#include <string>

#include "stackopt/error.hpp"
#include "stackopt/kernels.hpp"

namespace stackopt {

void LifecycleConfig::validate() const {
  electrolyzer.validate();
  economics.validate();
  dispatch.validate();
  if (dispatch.horizon() == 0) throw Error(ErrorKind::OutOfRange, "dispatch horizon must be at least one step");
  if (max_years == 0) throw Error(ErrorKind::OutOfRange, "max_years must be >= 1");
}

double LifecycleConfig::annual_demand_mass() const { return dispatch.demand.total_mass(dispatch.dt) * annualization(); }

YearStep year_step(const DegradationState& state, const LifecycleConfig& config, const DegradationScenario& scenario,
                   const lp::Solver& solver, DispatchSolution* dispatch_out) {
  const ElectrolyzerSpec& spec = config.electrolyzer;
  const auto bol = bol_curve(spec);
  const auto eps = degraded_curve(bol, state);
  const auto envelope = build_envelope(spec, eps);
  const auto lb = lower_bound_constraint(spec, eps.back(), config.lower_bound_mode);
  DispatchSolution sol = run_dispatch(config.dispatch, envelope, lb, solver);

  const auto pi = hourly_load_fractions(sol, spec.p_nom);
  const double scale = config.annualization();
  YearStep step;
  YearResult& y = step.result;
  y.year = state.year_index;
  y.r_start_percent = degradation_fraction(state, spec.eps_nom);
  y.dU_star = annual_voltage_increase(scenario, pi, config.dispatch.dt, config.operating_hours_only) * scale;
  y.costs = sol.annual_costs;
  y.booking = sol.booking;
  y.storage_capacity = sol.storage_capacity;
  y.mean_load = pi.empty() ? 0.0 : kernels::sum(pi) / static_cast<double>(pi.size());
  y.full_load_hours = kernels::sum(pi) * config.dispatch.dt * scale;
  y.iterations = sol.iterations;

  step.next = apply_year(state, y.dU_star, scenario.alpha, grid_fractions(spec.j_points));
  y.r_end_percent = degradation_fraction(step.next, spec.eps_nom);
  if (dispatch_out) *dispatch_out = std::move(sol);
  return step;
}

Trajectory simulate_trajectory(const LifecycleConfig& config, const DegradationScenario& scenario, double stop_threshold,
                               const lp::Solver& solver) {
  config.validate();
  scenario.validate();
  Trajectory traj;
  auto state = DegradationState::fresh(config.electrolyzer.j_points);
  while (traj.years.size() < config.max_years) {
    auto step = year_step(state, config, scenario, solver);
    const bool exceeded = step.result.r_end_percent > stop_threshold + kThresholdSlack;
    const bool unchanged = step.result.dU_star == 0.0;
    traj.years.push_back(std::move(step.result));
    state = std::move(step.next);
    if (exceeded) break;
    if (unchanged) {
      traj.stationary = true;
      break;
    }
  }
  return traj;
}

LifecycleResult finalize_lifecycle(const Trajectory& trajectory, const LifecycleConfig& config, double threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw Error(ErrorKind::OutOfRange, "threshold must be a positive percentage");
  }
  std::size_t eol = 0;
  for (std::size_t k = 0; k < trajectory.years.size(); ++k) {
    if (trajectory.years[k].r_end_percent > threshold + kThresholdSlack) {
      eol = k + 1;
      break;
    }
  }
  if (eol == 0) {
    const double reached = trajectory.years.empty() ? 0.0 : trajectory.years.back().r_end_percent;
    throw Error(ErrorKind::MaxYearsExceeded,
                "threshold " + std::to_string(threshold) + " % not exceeded within " +
                    (trajectory.stationary ? std::string("any number of years (degradation stalled)")
                                           : std::to_string(config.max_years) + " years") +
                    "; reached " + std::to_string(reached) + " %");
  }

  LifecycleResult out;
  out.eol_years = eol;
  out.threshold = threshold;
  out.years.assign(trajectory.years.begin(), trajectory.years.begin() + static_cast<std::ptrdiff_t>(eol));
  const double mass = config.annual_demand_mass();
  const double peri = peripheral_cost_year(config.economics, config.electrolyzer.p_nom, mass);
  const double stacks = stack_cost_year(config.economics, config.electrolyzer.p_nom, static_cast<double>(eol));
  std::vector<YearCosts> records;
  records.reserve(eol);
  for (const auto& y : out.years) {
    records.push_back({y.costs.c_ppa, y.costs.c_storage, y.costs.r_surplus, peri, stacks});
    out.total_iterations += y.iterations;
  }
  out.lcoh = lcoh(records, mass, eol, config.lcoh_mode);
  return out;
}

LifecycleResult simulate_lifecycle(const LifecycleConfig& config, const DegradationScenario& scenario, double threshold,
                                   const lp::Solver& solver) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw Error(ErrorKind::OutOfRange, "threshold must be a positive percentage");
  }
  return finalize_lifecycle(simulate_trajectory(config, scenario, threshold, solver), config, threshold);
}

LifecycleResult simulate_lifecycle(const LifecycleConfig& config, const DegradationScenario& scenario, double threshold) {
  return simulate_lifecycle(config, scenario, threshold, lp::EmbeddedSolver{});
}

}  // namespace stackopt
