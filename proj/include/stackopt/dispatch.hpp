#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "stackopt/electrolyzer.hpp"
#include "stackopt/lp.hpp"
#include "stackopt/timeseries.hpp"

namespace stackopt {

struct PpaSource {
  CapacityFactorSeries factors;
  double price = 0.0;  // EUR/kWh on booked production
  double max_booking = std::numeric_limits<double>::infinity();  // kW
};

struct StorageTerms {
  bool enabled = true;
  double capacity_fee = 12.75;  // EUR/(kg a)
  double turnover_fee = 0.36;   // EUR/kg injected
  double max_in = std::numeric_limits<double>::infinity();        // kg/h
  double max_out = std::numeric_limits<double>::infinity();       // kg/h
  double max_capacity = std::numeric_limits<double>::infinity();  // kg
};

struct GridTerms {
  double sale_price = 0.0;  // EUR/kWh paid for surplus
  bool allow_arbitrage = false;  // skip the sale-price validator
  bool purchase_enabled = false;
  double purchase_price = 0.1976;  // EUR/kWh
};

struct DispatchInputs {
  std::vector<PpaSource> ppa;
  StorageTerms storage;
  GridTerms grid;
  DemandSeries demand = DemandSeries::create({});
  double dt = 1.0;                 // h
  double hours_per_year = 8760.0;  // annualization base

  std::size_t horizon() const { return demand.size(); }
  // T dt / hours_per_year; per-year fees are charged pro rata.
  double horizon_fraction() const { return static_cast<double>(horizon()) * dt / hours_per_year; }

  // Throws LengthMismatch / OutOfRange / UnboundedSurplusArbitrage.
  void validate() const;
};

// Column indices of the dispatch LP.
struct DispatchLayout {
  std::size_t horizon = 0;
  std::size_t sources = 0;
  bool purchase = false;
  std::size_t width = 0;  // columns per hour

  std::size_t p_source(std::size_t t, std::size_t s) const { return t * width + s; }
  std::size_t p_ely(std::size_t t) const { return t * width + sources; }
  std::size_t p_grid(std::size_t t) const { return t * width + sources + 1; }
  std::size_t mdot_ely(std::size_t t) const { return t * width + sources + 2; }
  std::size_t mdot_in(std::size_t t) const { return t * width + sources + 3; }
  std::size_t mdot_out(std::size_t t) const { return t * width + sources + 4; }
  std::size_t m_level(std::size_t t) const { return t * width + sources + 5; }
  std::size_t p_buy(std::size_t t) const { return t * width + sources + 6; }
  std::size_t booking(std::size_t s) const { return horizon * width + s; }
  std::size_t storage_capacity() const { return horizon * width + sources; }
};

struct DispatchProblem {
  lp::LpInstance lp;
  DispatchLayout layout;
  PiecewiseEnvelope envelope;
  HalfSpace lower_bound;
  // Row indices of the balance blocks (equalities).
  std::size_t first_h2_row = 0;
  std::size_t first_power_row = 0;
  std::size_t first_storage_row = 0;
};

DispatchProblem build_problem(const DispatchInputs& inputs, const PiecewiseEnvelope& envelope, const HalfSpace& lower_bound);

struct CostBreakdown {
  double c_ppa = 0.0;      // includes grid purchases when enabled
  double c_storage = 0.0;
  double r_surplus = 0.0;

  double total() const { return c_ppa + c_storage - r_surplus; }
};

struct DispatchSolution {
  std::size_t horizon = 0;
  double dt = 1.0;
  std::vector<Source> sources;
  std::vector<std::vector<double>> p_source;  // [source][t], kW
  std::vector<double> p_ely;
  std::vector<double> p_grid;  // surplus
  std::vector<double> p_buy;   // zeros unless purchase is enabled
  std::vector<double> mdot_ely;
  std::vector<double> mdot_in;
  std::vector<double> mdot_out;
  std::vector<double> m_level;
  std::vector<double> booking;  // kW per source
  double storage_capacity = 0.0;

  CostBreakdown costs;         // over the modelled horizon
  CostBreakdown annual_costs;  // scaled to hours_per_year
  double objective = 0.0;
  std::size_t iterations = 0;
  double max_balance_residual = 0.0;

  double booking_for(Source s) const;
};

// Solves, maps columns back to flows and recomputes the cost terms.
// Throws Error(Infeasible | Unbounded | UnboundedSurplusArbitrage |
// IterationLimit | NumericalBreakdown).
DispatchSolution solve_dispatch(const DispatchProblem& problem, const DispatchInputs& inputs, const lp::Solver& solver);

// Convenience: build + solve.
DispatchSolution run_dispatch(const DispatchInputs& inputs, const PiecewiseEnvelope& envelope, const HalfSpace& lower_bound,
                              const lp::Solver& solver);

std::vector<double> hourly_load_fractions(const DispatchSolution& solution, double p_nom);

// hour,P_onshore,P_offshore,P_solar,P_ely,P_surplus,m_dot_ely,m_dot_in,m_dot_out,m_level
void write_dispatch_csv(std::ostream& out, const DispatchSolution& solution);

}  // namespace stackopt
