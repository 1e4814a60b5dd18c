#pragma once

#include <cstddef>
#include <vector>

#include "stackopt/degradation.hpp"
#include "stackopt/dispatch.hpp"
#include "stackopt/economics.hpp"
#include "stackopt/electrolyzer.hpp"
#include "stackopt/lp.hpp"

namespace stackopt {

// Everything a lifecycle run needs except the degradation scenario and the
// end-of-life threshold.
struct LifecycleConfig {
  ElectrolyzerSpec electrolyzer;
  DispatchInputs dispatch;
  EconomicTerms economics;
  LowerBoundMode lower_bound_mode = LowerBoundMode::Current;
  LcohMode lcoh_mode = LcohMode::Averaged;
  bool operating_hours_only = false;
  std::size_t max_years = 40;

  void validate() const;
  // Factor turning horizon totals into per-year totals.
  double annualization() const { return 1.0 / dispatch.horizon_fraction(); }
  double annual_demand_mass() const;
};

struct YearResult {
  std::size_t year = 1;
  double r_start_percent = 0.0;
  double r_end_percent = 0.0;
  double dU_star = 0.0;  // V accumulated during this year
  CostBreakdown costs;   // per year
  std::vector<double> booking;
  double storage_capacity = 0.0;
  double mean_load = 0.0;        // average of pi over the horizon
  double full_load_hours = 0.0;  // per year
  std::size_t iterations = 0;
};

// One dispatch solve with the state's degraded curve, then one degradation
// update from the realized load profile.
struct YearStep {
  YearResult result;
  DegradationState next;
};

YearStep year_step(const DegradationState& state, const LifecycleConfig& config, const DegradationScenario& scenario,
                   const lp::Solver& solver, DispatchSolution* dispatch_out = nullptr);

// Consecutive years from a fresh stack. Years do not depend on the threshold,
// so one trajectory serves every threshold up to `stop_threshold`.
struct Trajectory {
  std::vector<YearResult> years;
  // Set when a year left the state unchanged: every later year would repeat it.
  bool stationary = false;
};

Trajectory simulate_trajectory(const LifecycleConfig& config, const DegradationScenario& scenario, double stop_threshold,
                               const lp::Solver& solver);

struct LifecycleResult {
  std::size_t eol_years = 0;
  double threshold = 0.0;
  std::vector<YearResult> years;  // years 1..eol_years
  LcohBreakdown lcoh;
  std::size_t total_iterations = 0;
};

// End of life is the first completed year after which R exceeds the threshold
// by more than 1e-9. Throws MaxYearsExceeded when the trajectory never does.
LifecycleResult finalize_lifecycle(const Trajectory& trajectory, const LifecycleConfig& config, double threshold);

// Throws OutOfRange (threshold <= 0, max_years 0), MaxYearsExceeded and any
// dispatch error.
LifecycleResult simulate_lifecycle(const LifecycleConfig& config, const DegradationScenario& scenario, double threshold,
                                   const lp::Solver& solver);
LifecycleResult simulate_lifecycle(const LifecycleConfig& config, const DegradationScenario& scenario, double threshold);

inline constexpr double kThresholdSlack = 1e-9;

}  // namespace stackopt
