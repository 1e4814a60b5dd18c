#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "stackopt/degradation.hpp"
#include "stackopt/dispatch.hpp"
#include "stackopt/electrolyzer.hpp"
#include "stackopt/error.hpp"

using namespace stackopt;

namespace {

ElectrolyzerSpec linear_spec(double p_nom = 1000.0) {
  ElectrolyzerSpec s;
  s.p_nom = p_nom;
  s.partload_gain = 0.0;
  s.j_points = 2;
  return s;
}

PiecewiseEnvelope linear_envelope(double p_nom = 1000.0) {
  auto s = linear_spec(p_nom);
  return build_envelope(s, bol_curve(s));
}

HalfSpace lb_for(const PiecewiseEnvelope& env) {
  ElectrolyzerSpec s;
  s.p_nom = env.p_nom;
  return lower_bound_constraint(s, env.eps_per_point.back());
}

DispatchInputs single_source(std::vector<double> f, std::vector<double> demand, bool storage) {
  DispatchInputs in;
  in.ppa.push_back({CapacityFactorSeries::create(Source::Onshore, std::move(f)), 0.05});
  in.demand = DemandSeries::create(std::move(demand));
  in.storage.enabled = storage;
  return in;
}

DispatchSolution solve(const DispatchInputs& in, const PiecewiseEnvelope& env) {
  return run_dispatch(in, env, lb_for(env), lp::EmbeddedSolver{});
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Config;
}

void expect_balances(const DispatchInputs& in, const DispatchSolution& sol, const PiecewiseEnvelope& env) {
  const std::size_t T = sol.horizon;
  for (std::size_t t = 0; t < T; ++t) {
    double supply = 0.0;
    for (std::size_t s = 0; s < in.ppa.size(); ++s) {
      EXPECT_GE(sol.p_source[s][t], -1e-9);
      EXPECT_NEAR(sol.p_source[s][t], sol.booking[s] * in.ppa[s].factors[t], 1e-6 * std::max(1.0, sol.booking[s]));
      supply += sol.p_source[s][t];
    }
    EXPECT_NEAR(supply + sol.p_buy[t] - sol.p_ely[t] - sol.p_grid[t], 0.0, 1e-6 * std::max(1.0, supply)) << "t=" << t;
    EXPECT_NEAR(sol.mdot_ely[t] - sol.mdot_in[t] + sol.mdot_out[t] - in.demand[t], 0.0, 1e-6 * std::max(1.0, in.demand[t]));
    for (double v : {sol.p_ely[t], sol.p_grid[t], sol.mdot_ely[t], sol.mdot_in[t], sol.mdot_out[t], sol.m_level[t]}) {
      EXPECT_GE(v, -1e-6);
    }
    EXPECT_LE(sol.mdot_ely[t], env.evaluate(sol.p_ely[t]) + 1e-6);
    const std::size_t prev = (t + T - 1) % T;
    EXPECT_NEAR(sol.m_level[t] - sol.m_level[prev] - (sol.mdot_in[t] - sol.mdot_out[t]) * in.dt, 0.0,
                1e-6 * std::max(1.0, sol.m_level[t]));
  }
  EXPECT_NEAR(sol.objective, sol.costs.total(), 1e-6 * std::max(1.0, std::abs(sol.objective)));
}

}  // namespace

TEST(Dispatch, TwoHourAnalyticCase) {
  auto env = linear_envelope();
  auto in = single_source({1.0, 1.0}, {10.0, 10.0}, false);
  auto sol = solve(in, env);
  ASSERT_EQ(sol.booking.size(), 1u);
  EXPECT_NEAR(sol.booking[0], 525.0, 1e-6);
  EXPECT_NEAR(sol.objective, 52.50, 1e-6);
  EXPECT_NEAR(sol.costs.c_ppa, 52.50, 1e-6);
  EXPECT_NEAR(sol.booking_for(Source::Onshore), 525.0, 1e-6);
  EXPECT_EQ(sol.booking_for(Source::Solar), 0.0);
  for (std::size_t t = 0; t < 2; ++t) {
    EXPECT_NEAR(sol.p_ely[t], 525.0, 1e-6);
    EXPECT_NEAR(sol.mdot_ely[t], 10.0, 1e-9);
    EXPECT_NEAR(sol.p_grid[t], 0.0, 1e-6);
  }
  expect_balances(in, sol, env);
}

TEST(Dispatch, ZeroDemandCostsNothing) {
  auto env = linear_envelope();
  auto sol = solve(single_source({1.0, 1.0}, {0.0, 0.0}, false), env);
  EXPECT_NEAR(sol.booking[0], 0.0, 1e-9);
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);
}

TEST(Dispatch, UnservableHourIsInfeasible) {
  auto env = linear_envelope();
  EXPECT_EQ(kind_of([&] { solve(single_source({1.0, 0.0}, {10.0, 10.0}, false), env); }), ErrorKind::Infeasible);
}

TEST(Dispatch, StorageShiftsProduction) {
  auto env = linear_envelope();
  auto in = single_source({1.0, 0.0}, {5.0, 5.0}, true);
  auto sol = solve(in, env);
  EXPECT_NEAR(sol.mdot_ely[0], 10.0, 1e-6);
  EXPECT_NEAR(sol.mdot_in[0], 5.0, 1e-6);
  EXPECT_NEAR(sol.mdot_out[1], 5.0, 1e-6);
  EXPECT_NEAR(sol.booking[0], 525.0, 1e-6);
  EXPECT_NEAR(sol.storage_capacity, 5.0, 1e-6);
  const double turn = 5.0 * in.storage.turnover_fee;
  const double cap = 5.0 * in.storage.capacity_fee * in.horizon_fraction();
  EXPECT_NEAR(sol.costs.c_storage, turn + cap, 1e-6);
  EXPECT_NEAR(sol.objective, 0.05 * 525.0 + turn + cap, 1e-6);
  expect_balances(in, sol, env);
  EXPECT_NEAR(sol.annual_costs.c_storage, sol.costs.c_storage / in.horizon_fraction(), 1e-6);
}

TEST(Dispatch, StorageFlowCapsBind) {
  auto env = linear_envelope();
  auto in = single_source({1.0, 0.0}, {5.0, 5.0}, true);
  in.storage.max_in = 4.0;
  EXPECT_EQ(kind_of([&] { solve(in, env); }), ErrorKind::Infeasible);
}

TEST(Dispatch, ArbitrageIsRejectedOrDiagnosed) {
  auto env = linear_envelope();
  DispatchInputs in;
  in.ppa.push_back({CapacityFactorSeries::create(Source::Solar, {0.5, 0.5}), 0.0555});
  in.demand = DemandSeries::create({1.0, 1.0});
  in.grid.sale_price = 0.1976;
  EXPECT_EQ(kind_of([&] { in.validate(); }), ErrorKind::UnboundedSurplusArbitrage);
  EXPECT_EQ(kind_of([&] { solve(in, env); }), ErrorKind::UnboundedSurplusArbitrage);
  in.grid.allow_arbitrage = true;
  EXPECT_EQ(kind_of([&] { solve(in, env); }), ErrorKind::UnboundedSurplusArbitrage);
  // A finite booking cap turns the same prices into a bounded problem.
  in.ppa[0].max_booking = 2000.0;
  auto sol = solve(in, env);
  EXPECT_NEAR(sol.booking[0], 2000.0, 1e-6);
  EXPECT_LT(sol.objective, 0.0);
  expect_balances(in, sol, env);
}

TEST(Dispatch, SaleBelowPpaPriceIsBounded) {
  auto env = linear_envelope();
  auto in = single_source({1.0, 0.5}, {10.0, 10.0}, false);
  in.grid.sale_price = 0.01;
  auto sol = solve(in, env);
  EXPECT_NEAR(sol.booking[0], 1050.0, 1e-6);
  EXPECT_NEAR(sol.p_grid[0], 525.0, 1e-6);
  EXPECT_NEAR(sol.costs.r_surplus, 525.0 * 0.01, 1e-6);
  expect_balances(in, sol, env);
}

TEST(Dispatch, GridPurchaseCoversGaps) {
  auto env = linear_envelope();
  auto in = single_source({1.0, 0.0}, {10.0, 10.0}, false);
  in.grid.purchase_enabled = true;
  in.grid.purchase_price = 0.2;
  auto sol = solve(in, env);
  EXPECT_NEAR(sol.p_buy[1], 525.0, 1e-6);
  EXPECT_NEAR(sol.objective, 0.05 * 525.0 + 0.2 * 525.0, 1e-6);
  expect_balances(in, sol, env);
  in.grid.sale_price = 0.25;
  in.grid.purchase_price = 0.2;
  in.ppa[0].price = 0.3;
  EXPECT_EQ(kind_of([&] { in.validate(); }), ErrorKind::UnboundedSurplusArbitrage);
}

TEST(Dispatch, InputValidation) {
  auto env = linear_envelope();
  auto in = single_source({1.0, 1.0}, {10.0, 10.0, 10.0}, false);
  EXPECT_EQ(kind_of([&] { solve(in, env); }), ErrorKind::LengthMismatch);
  in = single_source({1.0, 1.0}, {10.0, 10.0}, false);
  in.ppa[0].price = -0.01;
  EXPECT_EQ(kind_of([&] { in.validate(); }), ErrorKind::OutOfRange);
  in = single_source({1.0, 1.0}, {10.0, 10.0}, false);
  in.storage.turnover_fee = -1.0;
  EXPECT_EQ(kind_of([&] { in.validate(); }), ErrorKind::OutOfRange);
}

TEST(Dispatch, EnvelopeActivityWithPartLoadCurve) {
  ElectrolyzerSpec spec;
  spec.p_nom = 1000.0;
  spec.j_points = 5;
  auto env = build_envelope(spec, bol_curve(spec));
  auto in = single_source({1.0, 0.3, 0.7, 0.1, 0.9, 0.5}, {6.0, 2.0, 9.0, 1.0, 12.0, 4.0}, true);
  in.ppa.push_back({CapacityFactorSeries::create(Source::Solar, {0.0, 0.6, 0.8, 0.2, 0.0, 0.4}), 0.04});
  auto sol = run_dispatch(in, env, lower_bound_constraint(spec, 52.5), lp::EmbeddedSolver{});
  expect_balances(in, sol, env);
  for (std::size_t t = 0; t < sol.horizon; ++t) {
    if (sol.p_ely[t] > 1e-6) EXPECT_NEAR(sol.mdot_ely[t], env.evaluate(sol.p_ely[t]), 1e-6);
  }
}

TEST(Dispatch, LoadFractions) {
  DispatchSolution s;
  s.p_ely = {525.0, 0.0};
  auto pi = hourly_load_fractions(s, 1000.0);
  ASSERT_EQ(pi.size(), 2u);
  EXPECT_DOUBLE_EQ(pi[0], 0.525);
  EXPECT_EQ(pi[1], 0.0);
  s.p_ely = {1000.0, 1000.0, 1000.0};
  for (double v : hourly_load_fractions(s, 1000.0)) EXPECT_EQ(v, 1.0);
  s.p_ely.clear();
  EXPECT_TRUE(hourly_load_fractions(s, 1000.0).empty());
}

TEST(Dispatch, CsvExport) {
  auto env = linear_envelope();
  auto sol = solve(single_source({1.0, 1.0}, {10.0, 10.0}, false), env);
  std::ostringstream out;
  write_dispatch_csv(out, sol);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "hour,P_onshore,P_offshore,P_solar,P_ely,P_surplus,m_dot_ely,m_dot_in,m_dot_out,m_level");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 10), "0,525,0,0,");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

using fixtures::random_case;

TEST(DispatchProperties, ConservationOnRandomCases) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t T = seed <= 4 ? 24 * seed : 336;
    auto c = random_case(seed, T);
    auto sol = run_dispatch(c.inputs, c.envelope, c.lower_bound, lp::EmbeddedSolver{});
    expect_balances(c.inputs, sol, c.envelope);
    for (std::size_t t = 0; t < T; ++t) {
      EXPECT_TRUE(c.lower_bound.satisfied(sol.p_ely[t], sol.mdot_ely[t]));
      if (sol.p_ely[t] > 1e-6) EXPECT_NEAR(sol.mdot_ely[t], c.envelope.evaluate(sol.p_ely[t]), 1e-6);
    }
    EXPECT_LE(sol.max_balance_residual, 1e-6);
  }
}

TEST(DispatchProperties, DegradedEnvelopeNeverCheaper) {
  ElectrolyzerSpec spec;
  spec.p_nom = 1000.0;
  spec.j_points = 5;
  auto bol = bol_curve(spec);
  auto grid = grid_fractions(5);
  auto c = random_case(11, 72);
  double prev = -1.0;
  auto state = DegradationState::fresh(5);
  for (int year = 0; year < 5; ++year) {
    auto eps = degraded_curve(bol, state);
    auto env = build_envelope(spec, eps);
    auto sol = run_dispatch(c.inputs, env, lower_bound_constraint(spec, eps.back()), lp::EmbeddedSolver{});
    EXPECT_GE(sol.objective, prev - 1e-6 * std::abs(prev));
    prev = sol.objective;
    state = apply_year(state, 0.0657, 0.4125, grid);
  }
}

// Scaling a source's factors uniformly leaves the attainable production
// profiles and their cost unchanged, since the booking rescales inversely.
TEST(DispatchProperties, UniformFactorScalingKeepsOptimum) {
  auto env = linear_envelope();
  auto c = random_case(5, 48);
  c.inputs.ppa.erase(c.inputs.ppa.begin() + 1, c.inputs.ppa.end());
  auto base = run_dispatch(c.inputs, env, lb_for(env), lp::EmbeddedSolver{});
  std::vector<double> scaled;
  for (double v : c.inputs.ppa[0].factors.values()) scaled.push_back(v * 0.5);
  c.inputs.ppa[0].factors = CapacityFactorSeries::create(Source::Onshore, scaled);
  auto half = run_dispatch(c.inputs, env, lb_for(env), lp::EmbeddedSolver{});
  EXPECT_NEAR(half.objective, base.objective, 1e-6 * base.objective);
  EXPECT_NEAR(half.booking[0], 2.0 * base.booking[0], 1e-5 * base.booking[0]);
}

TEST(DispatchProperties, AddingSourceNeverIncreasesCost) {
  auto env = linear_envelope();
  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    auto c = random_case(seed, 48);
    c.inputs.ppa.erase(c.inputs.ppa.begin() + 1, c.inputs.ppa.end());
    auto one = run_dispatch(c.inputs, env, lb_for(env), lp::EmbeddedSolver{});
    c.inputs.ppa.push_back({synthetic_capacity_factors(Source::Solar, 48, seed, 4000), 0.0555});
    auto two = run_dispatch(c.inputs, env, lb_for(env), lp::EmbeddedSolver{});
    EXPECT_LE(two.objective, one.objective + 1e-6 * one.objective);
  }
}

// Pointwise higher availability can raise cost under pay-as-produced pricing:
// the extra production in hour 2 is paid for but not needed.
TEST(DispatchProperties, PointwiseAvailabilityIncreaseCanCostMore) {
  auto env = linear_envelope();
  auto low = solve(single_source({1.0, 0.1}, {10.0, 0.0}, false), env);
  auto high = solve(single_source({1.0, 1.0}, {10.0, 0.0}, false), env);
  EXPECT_NEAR(low.objective, 0.05 * 525.0 * 1.1, 1e-6);
  EXPECT_NEAR(high.objective, 0.05 * 525.0 * 2.0, 1e-6);
  EXPECT_GT(high.objective, low.objective);
}
