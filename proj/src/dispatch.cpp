#include "stackopt/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "stackopt/error.hpp"
#include "stackopt/kernels.hpp"

namespace stackopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_ppa_price(const DispatchInputs& in) {
  double p = kInf;
  for (const auto& s : in.ppa) p = std::min(p, s.price);
  return p;
}

bool arbitrage_possible(const DispatchInputs& in) {
  const double sale = in.grid.sale_price;
  if (!(sale > 0.0)) return false;
  if (sale >= min_ppa_price(in)) return true;
  return in.grid.purchase_enabled && in.grid.purchase_price <= sale;
}

std::string tname(const char* base, std::size_t t) { return std::string(base) + "[" + std::to_string(t) + "]"; }

}  // namespace

void DispatchInputs::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::OutOfRange, "dt must be > 0");
  if (!(hours_per_year > 0.0)) throw Error(ErrorKind::OutOfRange, "hours_per_year must be > 0");
  for (const auto& s : ppa) {
    const std::string name(to_string(s.factors.source()));
    if (s.factors.size() != horizon()) {
      throw Error(ErrorKind::LengthMismatch, name + " series has " + std::to_string(s.factors.size()) +
                                                 " steps, demand has " + std::to_string(horizon()));
    }
    if (s.factors.dt_hours() != dt) throw Error(ErrorKind::LengthMismatch, name + " series step differs from dt");
    if (!(s.price >= 0.0) || !std::isfinite(s.price)) throw Error(ErrorKind::OutOfRange, name + " price must be >= 0");
    if (!(s.max_booking >= 0.0)) throw Error(ErrorKind::OutOfRange, name + " max_booking must be >= 0");
  }
  for (double v : {storage.capacity_fee, storage.turnover_fee, storage.max_in, storage.max_out, storage.max_capacity}) {
    if (!(v >= 0.0)) throw Error(ErrorKind::OutOfRange, "storage terms must be >= 0");
  }
  if (!(grid.sale_price >= 0.0) || !std::isfinite(grid.sale_price)) throw Error(ErrorKind::OutOfRange, "sale price must be >= 0");
  if (!(grid.purchase_price >= 0.0) || !std::isfinite(grid.purchase_price)) throw Error(ErrorKind::OutOfRange, "purchase price must be >= 0");
  if (!grid.allow_arbitrage && arbitrage_possible(*this)) {
    throw Error(ErrorKind::UnboundedSurplusArbitrage,
                "surplus sale price " + std::to_string(grid.sale_price) +
                    " EUR/kWh is not below every PPA/purchase price; booking and reselling would be unbounded "
                    "(set the arbitrage override to solve anyway)");
  }
}

double DispatchSolution::booking_for(Source s) const {
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i] == s) return booking[i];
  }
  return 0.0;
}

DispatchProblem build_problem(const DispatchInputs& in, const PiecewiseEnvelope& envelope, const HalfSpace& lower_bound) {
  in.validate();
  envelope.check_concave();
  if (envelope.segments.empty()) throw Error(ErrorKind::LengthMismatch, "envelope has no segments");

  const std::size_t T = in.horizon();
  const std::size_t S = in.ppa.size();
  const double dt = in.dt;
  const bool storage = in.storage.enabled;

  DispatchProblem prob;
  prob.envelope = envelope;
  prob.lower_bound = lower_bound;
  DispatchLayout& L = prob.layout;
  L.horizon = T;
  L.sources = S;
  L.purchase = in.grid.purchase_enabled;
  L.width = S + 6 + (L.purchase ? 1 : 0);
  lp::LpInstance& lp = prob.lp;

  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      const double f = in.ppa[s].factors[t];
      lp.add_variable(tname(std::string("P_").append(to_string(in.ppa[s].factors.source())).c_str(), t), 0.0, f > 0.0 ? kInf : 0.0);
    }
    lp.add_variable(tname("P_ely", t), 0.0, envelope.p_nom);
    lp.add_variable(tname("P_grid", t), 0.0, kInf, -in.grid.sale_price * dt);
    lp.add_variable(tname("mdot_ely", t), 0.0, kInf);
    lp.add_variable(tname("mdot_in", t), 0.0, storage ? in.storage.max_in : 0.0, in.storage.turnover_fee * dt);
    lp.add_variable(tname("mdot_out", t), 0.0, storage ? in.storage.max_out : 0.0);
    lp.add_variable(tname("m_level", t), 0.0, storage ? kInf : 0.0);
    if (L.purchase) lp.add_variable(tname("P_buy", t), 0.0, kInf, in.grid.purchase_price * dt);
  }
  for (std::size_t s = 0; s < S; ++s) {
    const auto f = in.ppa[s].factors.values();
    const double produced = kernels::sum(f) * dt;
    lp.add_variable(std::string("booking_").append(to_string(in.ppa[s].factors.source())), 0.0, in.ppa[s].max_booking,
                    in.ppa[s].price * produced);
  }
  lp.add_variable("storage_capacity", 0.0, storage ? in.storage.max_capacity : 0.0,
                  in.storage.capacity_fee * in.horizon_fraction());

  std::vector<lp::Term> row;
  prob.first_h2_row = lp.num_equalities();
  for (std::size_t t = 0; t < T; ++t) {
    lp.add_equality({{L.mdot_ely(t), 1.0}, {L.mdot_in(t), -1.0}, {L.mdot_out(t), 1.0}}, in.demand[t]);
  }
  prob.first_power_row = lp.num_equalities();
  for (std::size_t t = 0; t < T; ++t) {
    row.clear();
    for (std::size_t s = 0; s < S; ++s) row.push_back({L.p_source(t, s), 1.0});
    if (L.purchase) row.push_back({L.p_buy(t), 1.0});
    row.push_back({L.p_ely(t), -1.0});
    row.push_back({L.p_grid(t), -1.0});
    lp.add_equality(std::span<const lp::Term>(row), 0.0);
  }
  prob.first_storage_row = lp.num_equalities();
  if (storage) {
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t prev = t == 0 ? T - 1 : t - 1;  // t = 0 closes the cycle
      lp.add_equality({{L.m_level(t), 1.0}, {L.m_level(prev), -1.0}, {L.mdot_in(t), -dt}, {L.mdot_out(t), dt}}, 0.0);
    }
  }

  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      const double f = in.ppa[s].factors[t];
      if (f > 0.0) lp.add_less_equal({{L.p_source(t, s), 1.0}, {L.booking(s), -f}}, 0.0);
    }
    if (storage) lp.add_less_equal({{L.m_level(t), 1.0}, {L.storage_capacity(), -1.0}}, 0.0);
    for (const Segment& seg : envelope.segments) {
      lp.add_less_equal({{L.mdot_ely(t), 1.0}, {L.p_ely(t), -seg.a}}, seg.b);
    }
    if (lower_bound.coef_power != 0.0 || lower_bound.coef_mdot != 0.0) {
      lp.add_less_equal({{L.p_ely(t), lower_bound.coef_power}, {L.mdot_ely(t), lower_bound.coef_mdot}}, lower_bound.rhs);
    }
  }
  return prob;
}

DispatchSolution solve_dispatch(const DispatchProblem& prob, const DispatchInputs& in, const lp::Solver& solver) {
  const lp::LpSolution lps = solver.solve(prob.lp);
  switch (lps.status) {
    case lp::Status::Optimal: break;
    case lp::Status::Infeasible:
      throw Error(ErrorKind::Infeasible, "dispatch LP is infeasible: demand cannot be served with the given PPA, storage and electrolyzer limits");
    case lp::Status::Unbounded:
      if (arbitrage_possible(in)) {
        throw Error(ErrorKind::UnboundedSurplusArbitrage, "dispatch LP is unbounded: surplus sale price " +
                                                              std::to_string(in.grid.sale_price) +
                                                              " EUR/kWh makes unlimited booking and resale profitable");
      }
      throw Error(ErrorKind::Unbounded, "dispatch LP is unbounded");
    case lp::Status::IterationLimit: throw Error(ErrorKind::IterationLimit, "dispatch LP hit the iteration limit");
    case lp::Status::NumericalBreakdown: throw Error(ErrorKind::NumericalBreakdown, "dispatch LP: " + lps.message);
  }

  const DispatchLayout& L = prob.layout;
  const std::size_t T = L.horizon;
  const double dt = in.dt;
  auto val = [&](std::size_t col) {
    const double v = lps.x[col];
    return v < 0.0 && v > -1e-9 ? 0.0 : v;
  };

  DispatchSolution out;
  out.horizon = T;
  out.dt = dt;
  out.objective = lps.objective;
  out.iterations = lps.iterations;
  for (const auto& s : in.ppa) out.sources.push_back(s.factors.source());
  out.p_source.assign(L.sources, std::vector<double>(T));
  out.p_ely.resize(T);
  out.p_grid.resize(T);
  out.p_buy.assign(T, 0.0);
  out.mdot_ely.resize(T);
  out.mdot_in.resize(T);
  out.mdot_out.resize(T);
  out.m_level.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < L.sources; ++s) out.p_source[s][t] = val(L.p_source(t, s));
    out.p_ely[t] = val(L.p_ely(t));
    out.p_grid[t] = val(L.p_grid(t));
    if (L.purchase) out.p_buy[t] = val(L.p_buy(t));
    out.mdot_ely[t] = val(L.mdot_ely(t));
    out.mdot_in[t] = val(L.mdot_in(t));
    out.mdot_out[t] = val(L.mdot_out(t));
    out.m_level[t] = val(L.m_level(t));
  }
  for (std::size_t s = 0; s < L.sources; ++s) out.booking.push_back(val(L.booking(s)));
  out.storage_capacity = val(L.storage_capacity());

  // Power that the envelope does not need is surplus: with free disposal
  // the LP is indifferent between feeding it to the electrolyzer and the grid.
  for (std::size_t t = 0; t < T; ++t) {
    const double needed = prob.envelope.min_power_for(out.mdot_ely[t]);
    if (needed < out.p_ely[t]) {
      out.p_grid[t] += out.p_ely[t] - needed;
      out.p_ely[t] = needed;
    }
  }
  // Booked production is paid in full; whatever the LP left below its
  // availability cap is unconsumed and therefore surplus too.
  for (std::size_t s = 0; s < L.sources; ++s) {
    for (std::size_t t = 0; t < T; ++t) {
      const double produced = out.booking[s] * in.ppa[s].factors[t];
      if (produced > out.p_source[s][t]) {
        out.p_grid[t] += produced - out.p_source[s][t];
        out.p_source[s][t] = produced;
      }
    }
  }

  CostBreakdown& c = out.costs;
  for (std::size_t s = 0; s < L.sources; ++s) {
    c.c_ppa += in.ppa[s].price * out.booking[s] * kernels::sum(in.ppa[s].factors.values()) * dt;
  }
  c.c_ppa += in.grid.purchase_price * kernels::sum(out.p_buy) * dt;
  c.c_storage = in.storage.capacity_fee * in.horizon_fraction() * out.storage_capacity +
                in.storage.turnover_fee * kernels::sum(out.mdot_in) * dt;
  c.r_surplus = in.grid.sale_price * kernels::sum(out.p_grid) * dt;
  const double scale = in.horizon_fraction() > 0.0 ? 1.0 / in.horizon_fraction() : 0.0;
  out.annual_costs = {c.c_ppa * scale, c.c_storage * scale, c.r_surplus * scale};

  if (std::fabs(c.total() - out.objective) > 1e-6 * (1.0 + std::fabs(out.objective))) {
    throw Error(ErrorKind::NumericalBreakdown, "recomputed dispatch cost " + std::to_string(c.total()) +
                                                   " disagrees with LP objective " + std::to_string(out.objective));
  }

  double res = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    res = std::max(res, std::fabs(out.mdot_ely[t] - out.mdot_in[t] + out.mdot_out[t] - in.demand[t]));
    double power = out.p_buy[t] - out.p_ely[t] - out.p_grid[t];
    for (std::size_t s = 0; s < L.sources; ++s) power += out.p_source[s][t];
    res = std::max(res, std::fabs(power));
    const std::size_t prev = t == 0 ? T - 1 : t - 1;
    res = std::max(res, std::fabs(out.m_level[t] - out.m_level[prev] - (out.mdot_in[t] - out.mdot_out[t]) * dt));
  }
  out.max_balance_residual = res;
  return out;
}

DispatchSolution run_dispatch(const DispatchInputs& inputs, const PiecewiseEnvelope& envelope, const HalfSpace& lower_bound,
                              const lp::Solver& solver) {
  return solve_dispatch(build_problem(inputs, envelope, lower_bound), inputs, solver);
}

std::vector<double> hourly_load_fractions(const DispatchSolution& solution, double p_nom) {
  if (!(p_nom > 0.0)) throw Error(ErrorKind::OutOfRange, "p_nom must be > 0");
  std::vector<double> pi(solution.p_ely.size());
  kernels::scale(solution.p_ely, 1.0 / p_nom, pi);
  for (double& v : pi) v = std::clamp(v, 0.0, 1.0);
  return pi;
}

void write_dispatch_csv(std::ostream& out, const DispatchSolution& s) {
  out << "hour,P_onshore,P_offshore,P_solar,P_ely,P_surplus,m_dot_ely,m_dot_in,m_dot_out,m_level\n";
  std::vector<int> column(3, -1);
  for (std::size_t i = 0; i < s.sources.size(); ++i) column[static_cast<int>(s.sources[i])] = static_cast<int>(i);
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.6g", v == 0.0 ? 0.0 : v);
    out << buf;
  };
  for (std::size_t t = 0; t < s.horizon; ++t) {
    out << t;
    for (int c : column) put(c < 0 ? 0.0 : s.p_source[c][t]);
    put(s.p_ely[t]);
    put(s.p_grid[t]);
    put(s.mdot_ely[t]);
    put(s.mdot_in[t]);
    put(s.mdot_out[t]);
    put(s.m_level[t]);
    out << '\n';
  }
}

}  // namespace stackopt
