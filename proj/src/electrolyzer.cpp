#include "stackopt/electrolyzer.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "stackopt/error.hpp"

namespace stackopt {

void ElectrolyzerSpec::validate() const {
  if (!(p_nom > 0.0) || !std::isfinite(p_nom)) throw Error(ErrorKind::OutOfRange, "p_nom must be > 0");
  if (!(eps_nom > 0.0) || !std::isfinite(eps_nom)) throw Error(ErrorKind::OutOfRange, "eps_nom must be > 0");
  if (!(partload_gain >= 0.0 && partload_gain < 0.1)) throw Error(ErrorKind::OutOfRange, "partload_gain must lie in [0, 0.1)");
  if (j_points < 2) throw Error(ErrorKind::OutOfRange, "j_points must be >= 2");
}

double bol_energy_demand(const ElectrolyzerSpec& spec, double pi) {
  if (!(pi >= 0.0 && pi <= 1.0)) throw Error(ErrorKind::OutOfRange, "load fraction " + std::to_string(pi) + " outside [0, 1]");
  return spec.eps_nom * (1.0 - spec.partload_gain * 10.0 * (1.0 - pi));
}

std::vector<double> grid_fractions(std::size_t j_points) {
  if (j_points < 2) throw Error(ErrorKind::OutOfRange, "j_points must be >= 2");
  std::vector<double> f(j_points);
  const double last = static_cast<double>(j_points - 1);
  for (std::size_t j = 0; j < j_points; ++j) f[j] = static_cast<double>(j) / last;
  return f;
}

std::vector<double> bol_curve(const ElectrolyzerSpec& spec) {
  auto f = grid_fractions(spec.j_points);
  std::vector<double> eps(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) eps[j] = bol_energy_demand(spec, f[j]);
  return eps;
}

double PiecewiseEnvelope::evaluate(double power) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Segment& s : segments) best = std::min(best, s.a * power + s.b);
  return best;
}

double PiecewiseEnvelope::min_power_for(double mdot) const {
  // The envelope is concave and increasing, so its inverse is the max over
  // the inverted chords.
  double p = 0.0;
  for (const Segment& s : segments) {
    if (s.a > 0.0) p = std::max(p, (mdot - s.b) / s.a);
  }
  return std::clamp(p, 0.0, p_nom);
}

void PiecewiseEnvelope::check_concave() const {
  for (std::size_t j = 1; j < segments.size(); ++j) {
    const double prev = segments[j - 1].a;
    if (segments[j].a > prev + 1e-12 * std::fabs(prev)) {
      throw Error(ErrorKind::NonConcave, "segment " + std::to_string(j) + " slope " + std::to_string(segments[j].a) +
                                             " exceeds previous slope " + std::to_string(prev));
    }
  }
}

PiecewiseEnvelope build_envelope(const ElectrolyzerSpec& spec, std::span<const double> eps_per_point) {
  spec.validate();
  if (eps_per_point.size() != spec.j_points) {
    throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(spec.j_points) + " energy-demand points, got " +
                                               std::to_string(eps_per_point.size()));
  }
  for (double e : eps_per_point) {
    if (!(e > 0.0) || !std::isfinite(e)) throw Error(ErrorKind::OutOfRange, "energy demand points must be > 0");
  }
  PiecewiseEnvelope env;
  env.p_nom = spec.p_nom;
  env.fractions = grid_fractions(spec.j_points);
  env.eps_per_point.assign(eps_per_point.begin(), eps_per_point.end());
  const std::size_t J = spec.j_points;
  std::vector<double> power(J), mdot(J);
  for (std::size_t j = 0; j < J; ++j) {
    power[j] = env.fractions[j] * spec.p_nom;
    mdot[j] = power[j] / eps_per_point[j];
  }
  env.segments.resize(J - 1);
  for (std::size_t j = 0; j + 1 < J; ++j) {
    const double a = (mdot[j + 1] - mdot[j]) / (power[j + 1] - power[j]);
    env.segments[j] = {a, mdot[j] - a * power[j]};
  }
  env.check_concave();
  return env;
}

HalfSpace lower_bound_constraint(const ElectrolyzerSpec& spec, double eps_nom, LowerBoundMode mode) {
  switch (mode) {
    case LowerBoundMode::Current: return {1.0, -eps_nom, 0.0};
    case LowerBoundMode::Literal: return {0.0, -eps_nom, -spec.p_nom};
    case LowerBoundMode::Off: break;
  }
  return {0.0, 0.0, 0.0};
}

}  // namespace stackopt
