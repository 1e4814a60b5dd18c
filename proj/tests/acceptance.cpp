// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
// Uses the shipped desk configuration (168 h synthetic horizon, J = 5).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "lp_oracle.hpp"
#include "stackopt/config.hpp"
#include "stackopt/degradation.hpp"
#include "stackopt/dispatch.hpp"
#include "stackopt/economics.hpp"
#include "stackopt/error.hpp"
#include "stackopt/lifecycle.hpp"
#include "stackopt/sweep.hpp"

namespace fs = std::filesystem;
using namespace stackopt;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Lifetime oracle exactly as stated: the conversion constant is the rounded
// 26.5887 kWh/(kg V).
std::size_t stated_oracle(double rho, double r) {
  const double per_year = 8760.0 * rho * 1e-6 * 26.5887 / 52.5 * 100.0;
  std::size_t k = 1;
  while (!(static_cast<double>(k) * per_year > r)) ++k;
  return k;
}

RunConfig desk() {
  auto rc = load_config(fs::path(STACKOPT_SOURCE_DIR) / "config/desk_config.json");
  rc.max_years = std::max<std::size_t>(rc.max_years, 50);  // bottom scale at 55 % needs 50 years
  return rc;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::EmptyCurve;  // sentinel: nothing thrown
}

const std::vector<double> kGrid = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55};

void criterion1(const LifecycleConfig& cfg, LifecycleResult& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = simulate_lifecycle(cfg, scenario_preset("base_const"), 20.0);
  const double secs = seconds_since(t0);
  report(1, out.eol_years == 7 && secs < 60.0,
         "base constant 7.5 uV/h at R = 20 %: eol " + std::to_string(out.eol_years) + " years (expected 7), " +
             fmt("%.2f", secs) + " s at T = " + std::to_string(cfg.dispatch.horizon()) + ", J = " +
             std::to_string(cfg.electrolyzer.j_points));
}

void criterion2(const LifecycleConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto top = simulate_lifecycle(cfg, scenario_preset("top_const"), 25.0).eol_years;
  const double t_top = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  const auto bottom = simulate_lifecycle(cfg, scenario_preset("bottom_const"), 15.0).eol_years;
  const double t_bottom = seconds_since(t1);
  report(2, top == 5 && bottom == 14 && t_top < 60.0 && t_bottom < 60.0,
         "top at 25 %: " + std::to_string(top) + " years (expected 5, " + fmt("%.2f", t_top) + " s); bottom at 15 %: " +
             std::to_string(bottom) + " years (expected 14, " + fmt("%.2f", t_bottom) + " s)");
}

void criterion3(const LifecycleConfig& cfg) {
  int matches = 0, total = 0;
  std::string mismatches;
  for (double rho : {2.5, 5.0, 7.5, 10.0, 12.5}) {
    const auto curve = sweep_threshold(cfg, DegradationScenario{"const", rho, rho, 1.0, 0.4125}, kGrid);
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
      ++total;
      const auto& p = curve.points[i];
      const auto expected = stated_oracle(rho, kGrid[i]);
      if (p.ok() && p.eol_years == expected) {
        ++matches;
      } else {
        mismatches += " (rho " + fmt("%g", rho) + ", R " + fmt("%g", kGrid[i]) + ": " + p.status + " " +
                      std::to_string(p.eol_years) + " vs " + std::to_string(expected) + ")";
      }
    }
  }
  report(3, matches == 55 && total == 55,
         "pipeline vs closed-form lifetime oracle: " + std::to_string(matches) + "/" + std::to_string(total) +
             " exact matches" + mismatches);
}

void criterion4() {
  const double v = voltage_to_energy(1.0);
  const double rel = std::fabs(v - 26.5887) / 26.5887;
  report(4, rel <= 5e-4, "1 V -> " + fmt("%.6f", v) + " kWh/kg, relative deviation " + fmt("%.2e", rel));
}

void criterion5() {
  ElectrolyzerSpec spec;
  spec.p_nom = 1000.0;
  spec.partload_gain = 0.0;
  spec.j_points = 2;
  const auto env = build_envelope(spec, bol_curve(spec));
  const auto lb = lower_bound_constraint(spec, 52.5);
  const lp::EmbeddedSolver solver;
  auto make = [](std::vector<double> f, std::vector<double> d, bool storage) {
    DispatchInputs in;
    in.ppa.push_back({CapacityFactorSeries::create(Source::Onshore, std::move(f)), 0.05});
    in.demand = DemandSeries::create(std::move(d));
    in.storage.enabled = storage;
    return in;
  };
  const auto a = run_dispatch(make({1, 1}, {10, 10}, false), env, lb, solver);
  const bool ok_a = std::fabs(a.booking[0] - 525.0) <= 1e-6 * 525.0 && std::fabs(a.objective - 52.5) <= 1e-6 * 52.5;
  const auto b = run_dispatch(make({1, 0}, {5, 5}, true), env, lb, solver);
  const bool ok_b = std::fabs(b.mdot_in[0] - 5.0) <= 1e-6 && std::fabs(b.mdot_ely[0] - 10.0) <= 1e-6;
  const auto infeasible = kind_of([&] { run_dispatch(make({1, 0}, {10, 10}, false), env, lb, solver); });
  DispatchInputs arb;
  arb.ppa.push_back({CapacityFactorSeries::create(Source::Solar, {0.5, 0.5}), 0.0555});
  arb.demand = DemandSeries::create({1, 1});
  arb.grid.sale_price = 0.1976;
  arb.grid.allow_arbitrage = true;
  const auto unbounded = kind_of([&] { run_dispatch(arb, env, lb, solver); });
  report(5,
         ok_a && ok_b && infeasible == ErrorKind::Infeasible && unbounded == ErrorKind::UnboundedSurplusArbitrage,
         "booking " + fmt("%.6f", a.booking[0]) + " kW, objective " + fmt("%.6f", a.objective) + " EUR; stored " +
             fmt("%.6f", b.mdot_in[0]) + " kg; infeasible case -> " + std::string(to_string(infeasible)) +
             "; arbitrage case -> " + std::string(to_string(unbounded)));
}

void criterion6() {
  std::mt19937_64 rng(20240601);
  int compared = 0, agree = 0, gap_ok = 0, optimal = 0;
  double worst_obj = 0.0, worst_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = oracle::random_lp(rng);
    const auto expected = oracle::vertex_enumeration(inst);
    const auto sol = lp::solve_lp(inst);
    ++compared;
    if (!expected) {
      if (sol.status == lp::Status::Infeasible) ++agree;
      continue;
    }
    if (sol.status != lp::Status::Optimal) continue;
    ++optimal;
    const double d = std::fabs(sol.objective - *expected);
    worst_obj = std::max(worst_obj, d);
    if (d <= 1e-7) ++agree;
    const auto rep = lp::check_optimality(inst, sol);
    worst_gap = std::max(worst_gap, rep.duality_gap);
    if (rep.duality_gap <= 1e-7) ++gap_ok;
  }
  report(6, compared >= 100 && agree == compared && gap_ok == optimal,
         std::to_string(agree) + "/" + std::to_string(compared) + " random LPs agree with vertex enumeration (" +
             std::to_string(optimal) + " optimal, worst objective error " + fmt("%.1e", worst_obj) +
             ", worst duality gap " + fmt("%.1e", worst_gap) + ")");
}

void criterion7() {
  const lp::EmbeddedSolver solver;
  double worst_h2 = 0.0, worst_power = 0.0, worst_cycle = 0.0;
  int solved = 0;
  const std::size_t horizons[] = {24, 48, 72, 96, 168, 168, 240, 336};
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto c = fixtures::random_case(100 + seed, horizons[seed]);
    const auto s = run_dispatch(c.inputs, c.envelope, c.lower_bound, solver);
    ++solved;
    const std::size_t T = s.horizon;
    for (std::size_t t = 0; t < T; ++t) {
      worst_h2 = std::max(worst_h2, std::fabs(s.mdot_ely[t] - s.mdot_in[t] + s.mdot_out[t] - c.inputs.demand[t]));
      double power = s.p_buy[t] - s.p_ely[t] - s.p_grid[t];
      for (const auto& src : s.p_source) power += src[t];
      worst_power = std::max(worst_power, std::fabs(power));
      const std::size_t prev = (t + T - 1) % T;
      worst_cycle = std::max(worst_cycle, std::fabs(s.m_level[t] - s.m_level[prev] -
                                                    (s.mdot_in[t] - s.mdot_out[t]) * c.inputs.dt));
    }
  }
  report(7, worst_h2 <= 1e-6 && worst_power <= 1e-6 && worst_cycle <= 1e-6,
         std::to_string(solved) + " random dispatches (T <= 336): max hydrogen residual " + fmt("%.1e", worst_h2) +
             " kg/h, power " + fmt("%.1e", worst_power) + " kW, storage closure " + fmt("%.1e", worst_cycle) + " kg");
}

void criterion8(const LifecycleConfig& cfg, ThresholdCurve& base_curve) {
  std::vector<std::pair<double, std::size_t>> optima;
  std::string detail;
  bool all = true;
  for (double alpha : {0.075, 0.4125, 0.75}) {
    auto curve = sweep_threshold(cfg, scenario_preset("base_const", alpha), kGrid);
    if (!curve.optimum) {
      all = false;
      detail += " alpha " + fmt("%g", alpha) + ": no optimum;";
      continue;
    }
    optima.emplace_back(curve.optimum->threshold, curve.optimum->eol_years);
    detail += " alpha " + fmt("%g", alpha) + ": R* " + fmt("%g", curve.optimum->threshold) + " %, eol* " +
              std::to_string(curve.optimum->eol_years) + ";";
    if (alpha == 0.4125) base_curve = curve;
  }
  const bool same = all && optima.size() == 3 && optima[0] == optima[1] && optima[1] == optima[2];
  report(8, same, "base constant scenario optimum across alpha:" + detail);
}

void criterion9(const LifecycleResult& base) {
  const double a20 = annuity_factor(0.07, 20), a7 = annuity_factor(0.07, 7);
  const bool annuity = std::fabs(a20 - 0.094393) <= 1e-6 && std::fabs(a7 - 0.185553) <= 1e-6;
  const double share_err = std::fabs(base.lcoh.shares.sum() - 1.0);
  EconomicTerms terms;
  bool decreasing = true;
  for (int t = 1; t < 40; ++t) decreasing = decreasing && stack_cost_year(terms, 300000.0, t + 1) < stack_cost_year(terms, 300000.0, t);
  report(9, annuity && share_err <= 1e-9 && decreasing,
         "A(0.07,20) = " + fmt("%.6f", a20) + ", A(0.07,7) = " + fmt("%.6f", a7) + "; share sum error " +
             fmt("%.1e", share_err) + "; stack cost strictly decreasing over 1..40: " + (decreasing ? "yes" : "no"));
}

bool real_data_check(std::string& detail) {
  const char* dir = std::getenv("STACKOPT_REAL_DATA_DIR");
  if (!dir || !*dir) {
    detail += "; real-data base case skipped (set STACKOPT_REAL_DATA_DIR to onshore.csv/offshore.csv/solar.csv)";
    return true;
  }
  auto rc = default_run_config();
  rc.electrolyzer.j_points = 5;
  rc.economics.capex = 1252.35;
  rc.base_dir = dir;
  for (auto& p : rc.ppa) p.series = std::string(to_string(p.source)) + ".csv";
  const auto curve = sweep_threshold(build_lifecycle_config(rc), scenario_preset("base_const"), kGrid);
  const bool ok = curve.optimum && curve.optimum->threshold == 20.0 && curve.optimum->eol_years == 7;
  detail += "; real-data base case optimum " +
            (curve.optimum ? fmt("%g", curve.optimum->threshold) + " % / " + std::to_string(curve.optimum->eol_years) + " years"
                           : std::string("none")) +
            " (expected 20 % / 7 years)";
  return ok;
}

void criterion10(const ThresholdCurve& curve, const LifecycleResult& base) {
  bool u_shape = curve.optimum.has_value();
  bool stack_down = true, ppa_up = true;
  if (u_shape) {
    const std::size_t k = curve.optimum->index;
    u_shape = k > 0 && k + 1 < curve.points.size();
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      const auto& p = curve.points[i - 1];
      const auto& q = curve.points[i];
      if (i <= k) u_shape = u_shape && q.lcoh < p.lcoh;
      else u_shape = u_shape && q.lcoh > p.lcoh;
      stack_down = stack_down && q.shares.stacks < p.shares.stacks;
      ppa_up = ppa_up && q.shares.ppa >= p.shares.ppa;
    }
  }
  bool cost_up = true;
  for (std::size_t k = 1; k < base.years.size(); ++k) {
    cost_up = cost_up && base.years[k].costs.total() >= base.years[k - 1].costs.total() * (1.0 - 1e-9);
  }
  // Booking dominance restated for pay-as-produced pricing: scaling a source
  // uniformly keeps the optimum, adding a source never raises it.
  bool dominance = true;
  const lp::EmbeddedSolver solver;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto c = fixtures::random_case(300 + seed, 48);
    c.inputs.ppa.erase(c.inputs.ppa.begin() + 1, c.inputs.ppa.end());
    const auto one = run_dispatch(c.inputs, c.envelope, c.lower_bound, solver);
    auto scaled = c.inputs;
    std::vector<double> half;
    for (double v : scaled.ppa[0].factors.values()) half.push_back(0.5 * v);
    scaled.ppa[0].factors = CapacityFactorSeries::create(Source::Onshore, half);
    const auto s = run_dispatch(scaled, c.envelope, c.lower_bound, solver);
    auto more = c.inputs;
    more.ppa.push_back({synthetic_capacity_factors(Source::Solar, 48, seed, 4000), 0.0555});
    const auto m = run_dispatch(more, c.envelope, c.lower_bound, solver);
    dominance = dominance && std::fabs(s.objective - one.objective) <= 1e-6 * one.objective &&
                m.objective <= one.objective * (1.0 + 1e-9);
  }
  std::string detail = std::string("synthetic base curve U-shaped: ") + (u_shape ? "yes" : "no") +
                       ", stack share decreasing in R: " + (stack_down ? "yes" : "no") +
                       ", PPA share increasing in R: " + (ppa_up ? "yes" : "no") +
                       ", yearly dispatch cost non-decreasing: " + (cost_up ? "yes" : "no") +
                       ", booking dominance (scaling/added source): " + (dominance ? "yes" : "no") +
                       "; absolute LCOH levels depend on weather data and are not asserted";
  const bool real_ok = real_data_check(detail);
  report(10, u_shape && stack_down && ppa_up && cost_up && dominance && real_ok, detail);
}

}  // namespace

int main() {
  try {
    const auto rc = desk();
    const auto cfg = build_lifecycle_config(rc);
    LifecycleResult base;
    ThresholdCurve base_curve;
    const auto guarded = [](int id, const std::function<void()>& fn) {
      try {
        fn();
      } catch (const std::exception& e) {
        report(id, false, std::string("error: ") + e.what());
      }
    };
    guarded(1, [&] { criterion1(cfg, base); });
    guarded(2, [&] { criterion2(cfg); });
    guarded(3, [&] { criterion3(cfg); });
    guarded(4, [] { criterion4(); });
    guarded(5, [] { criterion5(); });
    guarded(6, [] { criterion6(); });
    guarded(7, [] { criterion7(); });
    guarded(8, [&] { criterion8(cfg, base_curve); });
    guarded(9, [&] { criterion9(base); });
    guarded(10, [&] { criterion10(base_curve, base); });
  } catch (const std::exception& e) {
    std::printf("FAIL setup: %s\n", e.what());
    return 1;
  }
  std::printf("%s: %d criterion failure(s)\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
