#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace stackopt {

struct ElectrolyzerSpec {
  double p_nom = 300'000.0;      // kW
  double eps_nom = 52.5;         // kWh/kg at nominal load
  double partload_gain = 0.01;   // fractional decrease of eps per 10 % load reduction
  std::size_t j_points = 37;     // linearization grid points (J)

  // Throws Error(OutOfRange) on any violated domain.
  void validate() const;
};

// Beginning-of-life specific energy demand at load fraction pi.
double bol_energy_demand(const ElectrolyzerSpec& spec, double pi);

// pi_j = j / (J - 1), j = 0..J-1.
std::vector<double> grid_fractions(std::size_t j_points);

// bol_energy_demand evaluated on grid_fractions(spec.j_points).
std::vector<double> bol_curve(const ElectrolyzerSpec& spec);

struct Segment {
  double a;  // kg/kWh
  double b;  // kg/h
};

// Concave piecewise-linear upper envelope of the production curve
// mdot(P) = P / eps(P / p_nom), one chord per pair of adjacent grid points.
struct PiecewiseEnvelope {
  double p_nom = 0.0;
  std::vector<double> fractions;
  std::vector<double> eps_per_point;
  std::vector<Segment> segments;

  // min_j (a_j P + b_j)
  double evaluate(double power) const;
  // Smallest P in [0, p_nom] whose envelope value reaches mdot.
  double min_power_for(double mdot) const;
  // Throws Error(NonConcave) when some slope exceeds its predecessor.
  void check_concave() const;
};

PiecewiseEnvelope build_envelope(const ElectrolyzerSpec& spec, std::span<const double> eps_per_point);

enum class LowerBoundMode {
  Current,  // P_t - mdot_t * eps_nom <= 0
  Literal,  // P_nom - mdot_t * eps_nom <= 0
  Off,
};

// coef_power * P + coef_mdot * mdot <= rhs
struct HalfSpace {
  double coef_power = 0.0;
  double coef_mdot = 0.0;
  double rhs = 0.0;

  bool satisfied(double power, double mdot, double tol = 1e-9) const {
    return coef_power * power + coef_mdot * mdot <= rhs + tol * (1.0 + std::abs(rhs));
  }
};

// eps_nom is the (possibly degraded) nominal-load demand of the current year.
HalfSpace lower_bound_constraint(const ElectrolyzerSpec& spec, double eps_nom,
                                 LowerBoundMode mode = LowerBoundMode::Current);

}  // namespace stackopt
