#include "stackopt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>

#include "stackopt/error.hpp"
#include "stackopt/report.hpp"

namespace stackopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs task(i) for i in [0, n) on up to `workers` threads. The first
// exception by index is rethrown after all workers joined.
template <class Task>
void parallel_for(std::size_t n, std::size_t workers, Task task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void check_thresholds(std::span<const double> thresholds) {
  if (thresholds.empty()) throw Error(ErrorKind::Config, "threshold grid is empty");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0) || !std::isfinite(thresholds[i])) {
      throw Error(ErrorKind::Config, "thresholds must be positive percentages");
    }
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw Error(ErrorKind::Config, "thresholds must be strictly increasing");
    }
  }
}

CurvePoint failed_point(double threshold, std::string status) {
  CurvePoint p;
  p.threshold = threshold;
  p.lcoh = kNaN;
  p.status = std::move(status);
  return p;
}

ThresholdCurve failed_curve(std::span<const double> thresholds, const std::string& status) {
  ThresholdCurve c;
  for (double r : thresholds) c.points.push_back(failed_point(r, status));
  return c;
}

void mark_optimum(ThresholdCurve& curve) {
  try {
    curve.optimum = find_cost_optimum(curve.points);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyCurve) throw;
    curve.optimum.reset();
  }
}

}  // namespace

void SweepConfig::validate() const {
  check_thresholds(thresholds);
  if (capex.empty()) throw Error(ErrorKind::Config, "capex grid is empty");
  for (double c : capex) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorKind::Config, "capex values must be >= 0");
  }
  if (alphas.empty()) throw Error(ErrorKind::Config, "alpha grid is empty");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorKind::Config, "alpha values must lie in [0, 1]");
  }
  if (scenarios.empty()) throw Error(ErrorKind::Config, "scenario list is empty");
  for (const auto& s : scenarios) scenario_preset(s);
}

CostOptimum find_cost_optimum(std::span<const CurvePoint> curve) {
  std::optional<CostOptimum> best;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const CurvePoint& p = curve[i];
    if (!p.ok() || !std::isfinite(p.lcoh)) continue;
    const bool better = !best || p.lcoh < best->lcoh || (p.lcoh == best->lcoh && p.threshold < best->threshold);
    if (better) best = CostOptimum{i, p.threshold, p.eol_years, p.lcoh};
  }
  if (!best) throw Error(ErrorKind::EmptyCurve, "curve has no finite LCOH value");
  return *best;
}

ThresholdCurve curve_from_trajectory(const Trajectory& trajectory, const LifecycleConfig& config,
                                     std::span<const double> thresholds) {
  check_thresholds(thresholds);
  ThresholdCurve curve;
  curve.capex = config.economics.capex;
  for (double r : thresholds) {
    try {
      const auto life = finalize_lifecycle(trajectory, config, r);
      CurvePoint p;
      p.threshold = r;
      p.eol_years = life.eol_years;
      p.lcoh = life.lcoh.lcoh_av;
      p.shares = life.lcoh.shares;
      curve.points.push_back(p);
    } catch (const Error& e) {
      curve.points.push_back(failed_point(r, std::string(to_string(e.kind()))));
    }
  }
  mark_optimum(curve);
  return curve;
}

ThresholdCurve sweep_threshold(const LifecycleConfig& config, const DegradationScenario& scenario,
                               std::span<const double> thresholds, const lp::Solver& solver) {
  check_thresholds(thresholds);
  const auto traj = simulate_trajectory(config, scenario, thresholds.back(), solver);
  auto curve = curve_from_trajectory(traj, config, thresholds);
  curve.scenario = scenario.name;
  curve.alpha = scenario.alpha;
  return curve;
}

ThresholdCurve sweep_threshold(const LifecycleConfig& config, const DegradationScenario& scenario,
                               std::span<const double> thresholds) {
  return sweep_threshold(config, scenario, thresholds, lp::EmbeddedSolver{});
}

std::vector<SweepRecord> SweepTable::records() const {
  std::vector<SweepRecord> out;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      out.push_back({c.scenario, c.alpha, c.capex, c.points[i], c.optimum && c.optimum->index == i});
    }
  }
  return out;
}

SweepTable sweep_grid(const LifecycleConfig& base, const SweepConfig& sweep, const lp::Solver& solver) {
  sweep.validate();
  base.validate();
  const std::size_t n_alpha = sweep.alphas.size();
  const std::size_t n_capex = sweep.capex.size();
  const std::size_t n_tasks = sweep.scenarios.size() * n_alpha;

  // Each task owns its slice of the result vector, so the table layout never
  // depends on scheduling.
  SweepTable table;
  table.curves.resize(n_tasks * n_capex);
  parallel_for(n_tasks, sweep.parallelism, [&](std::size_t task) {
    const auto scenario = scenario_preset(sweep.scenarios[task / n_alpha], sweep.alphas[task % n_alpha]);
    Trajectory traj;
    std::string failure;
    try {
      traj = simulate_trajectory(base, scenario, sweep.thresholds.back(), solver);
    } catch (const Error& e) {
      failure = to_string(e.kind());
    }
    for (std::size_t c = 0; c < n_capex; ++c) {
      LifecycleConfig cfg = base;
      cfg.economics.capex = sweep.capex[c];
      ThresholdCurve curve = failure.empty() ? curve_from_trajectory(traj, cfg, sweep.thresholds)
                                             : failed_curve(sweep.thresholds, failure);
      curve.scenario = scenario.name;
      curve.alpha = scenario.alpha;
      curve.capex = sweep.capex[c];
      table.curves[task * n_capex + c] = std::move(curve);
    }
  });
  return table;
}

SweepTable sweep_grid(const LifecycleConfig& base, const SweepConfig& sweep) {
  return sweep_grid(base, sweep, lp::EmbeddedSolver{});
}

std::vector<std::filesystem::path> emit_figures(const LifecycleConfig& base, const SweepConfig& sweep,
                                                const std::filesystem::path& out_dir, const lp::Solver& solver) {
  sweep.validate();
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const char* name) {
    written.push_back(out_dir / name);
    std::ofstream f(written.back());
    if (!f) throw Error(ErrorKind::FileNotFound, "cannot write " + written.back().string());
    return f;
  };
  const double base_alpha = 0.4125;
  const std::vector<std::string> scales = {"bottom_const", "low_const", "base_const", "high_const", "top_const"};
  const std::vector<std::string> inflections = {"base_const", "infl_50", "infl_60", "infl_70", "infl_80", "infl_90"};

  auto run = [&](std::vector<std::string> scenarios, std::vector<double> alphas, std::vector<double> capex) {
    SweepConfig cfg = sweep;
    cfg.scenarios = std::move(scenarios);
    cfg.alphas = std::move(alphas);
    cfg.capex = std::move(capex);
    return sweep_grid(base, cfg, solver);
  };

  {
    auto f = open("fig3_base_case.csv");
    write_sweep_csv(f, run({"base_const"}, {base_alpha}, {base.economics.capex}));
  }
  {
    auto f = open("fig4_capex.csv");
    write_sweep_csv(f, run({"base_const"}, {base_alpha}, sweep.capex));
  }
  {
    auto f = open("fig5_alpha.csv");
    write_sweep_csv(f, run({"base_const"}, sweep.alphas, {base.economics.capex}));
  }
  {
    auto f = open("fig6_degradation_scenarios.csv");
    write_rate_curves(f, scenario_preset_names(), 101);
  }
  {
    auto f = open("fig7a_scale.csv");
    write_sweep_csv(f, run(scales, {base_alpha}, {base.economics.capex}));
  }
  {
    auto f = open("fig7b_inflection.csv");
    write_sweep_csv(f, run(inflections, {base_alpha}, {base.economics.capex}));
  }
  {
    auto f = open("fig8_overview.csv");
    write_optima_csv(f, run(scales, sweep.alphas, sweep.capex));
  }
  return written;
}

}  // namespace stackopt
