#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stackopt/economics.hpp"
#include "stackopt/lifecycle.hpp"
#include "stackopt/lp.hpp"

namespace stackopt {

struct SweepConfig {
  std::vector<double> thresholds = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55};  // %
  std::vector<double> capex = {502.43, 877.39, 1252.35, 1627.30, 2002.26};      // EUR/kW
  std::vector<double> alphas = {0.075, 0.4125, 0.75};
  std::vector<std::string> scenarios = {"base_const"};
  std::size_t parallelism = 1;  // 0: hardware concurrency

  // Throws Config on empty grids, non-increasing thresholds or unknown presets.
  void validate() const;
};

struct CurvePoint {
  double threshold = 0.0;
  std::size_t eol_years = 0;
  double lcoh = 0.0;  // NaN unless status is "ok"
  ComponentValues shares;
  std::string status = "ok";  // otherwise the error kind name

  bool ok() const { return status == "ok"; }
};

struct CostOptimum {
  std::size_t index = 0;  // into the curve
  double threshold = 0.0;
  std::size_t eol_years = 0;
  double lcoh = 0.0;
};

// Minimal LCOH over the points with status "ok"; ties go to the smaller
// threshold. Throws EmptyCurve when no point qualifies.
CostOptimum find_cost_optimum(std::span<const CurvePoint> curve);

struct ThresholdCurve {
  std::string scenario;
  double alpha = 0.0;
  double capex = 0.0;
  std::vector<CurvePoint> points;      // sorted by threshold
  std::optional<CostOptimum> optimum;  // empty when no threshold is reachable
};

// Evaluates every threshold against one trajectory (thresholds must be
// increasing). Unreached thresholds get status MaxYearsExceeded.
ThresholdCurve curve_from_trajectory(const Trajectory& trajectory, const LifecycleConfig& config,
                                     std::span<const double> thresholds);

// One lifecycle evaluation per threshold for the configured scenario.
ThresholdCurve sweep_threshold(const LifecycleConfig& config, const DegradationScenario& scenario,
                               std::span<const double> thresholds, const lp::Solver& solver);
ThresholdCurve sweep_threshold(const LifecycleConfig& config, const DegradationScenario& scenario,
                               std::span<const double> thresholds);

struct SweepRecord {
  std::string scenario;
  double alpha = 0.0;
  double capex = 0.0;
  CurvePoint point;
  bool is_optimum = false;
};

struct SweepTable {
  // Ordered scenario-major, then alpha, then capex, independent of scheduling.
  std::vector<ThresholdCurve> curves;

  std::vector<SweepRecord> records() const;
};

// Cartesian product scenarios x alphas x capex x thresholds. Trajectories are
// computed once per (scenario, alpha) in parallel; CAPEX only enters the
// economics. Failed trajectories mark their cells instead of aborting.
SweepTable sweep_grid(const LifecycleConfig& base, const SweepConfig& sweep, const lp::Solver& solver);
SweepTable sweep_grid(const LifecycleConfig& base, const SweepConfig& sweep);

// Per-figure CSV bundles (fig3_base_case.csv ... fig8_overview.csv) written to
// `out_dir`. Returns the written paths.
std::vector<std::filesystem::path> emit_figures(const LifecycleConfig& base, const SweepConfig& sweep,
                                                const std::filesystem::path& out_dir, const lp::Solver& solver);

}  // namespace stackopt
