#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "stackopt/config.hpp"
#include "stackopt/degradation.hpp"
#include "stackopt/dispatch.hpp"
#include "stackopt/electrolyzer.hpp"

namespace fixtures {

// Shipped defaults on a short synthetic horizon; costs are annualized, and
// lifetimes do not depend on the horizon for constant rates.
inline stackopt::RunConfig small_run_config(std::size_t hours = 24, std::size_t j_points = 3) {
  auto rc = stackopt::default_run_config();
  rc.horizon = hours;
  rc.electrolyzer.j_points = j_points;
  rc.max_years = 60;
  return rc;
}

inline stackopt::LifecycleConfig small_config(std::size_t hours = 24, std::size_t j_points = 3) {
  return stackopt::build_lifecycle_config(small_run_config(hours, j_points));
}

// Closed-form lifetime for a constant rate (uV/h): first k with
// k * 8760 h * rho * 1e-6 V/uV * 26.5887 kWh/(kg V) / 52.5 * 100 > R.
// The conversion factor is spelled out from the physical constants.
inline std::size_t oracle_lifetime(double rho_uv_per_h, double threshold_percent, double eps_nom = 52.5) {
  const double volt_to_kwh_per_kg = 2.0 * 96485.0 / 2.016e-3 / 3.6e6;
  const double per_year = 8760.0 * rho_uv_per_h * 1e-6 * volt_to_kwh_per_kg / eps_nom * 100.0;
  std::size_t k = 1;
  while (!(static_cast<double>(k) * per_year > threshold_percent + 1e-9)) ++k;
  return k;
}

struct RandomCase {
  stackopt::DispatchInputs inputs;
  stackopt::PiecewiseEnvelope envelope;
  stackopt::HalfSpace lower_bound;
};

// Feasible dispatch instance: one always-available source keeps every hour
// servable; up to two synthetic sources and storage are mixed in at random.
inline RandomCase random_case(std::uint64_t seed, std::size_t T) {
  using namespace stackopt;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ElectrolyzerSpec spec;
  spec.p_nom = 1000.0;
  spec.j_points = 2 + rng() % 5;
  RandomCase c{{}, build_envelope(spec, bol_curve(spec)), lower_bound_constraint(spec, spec.eps_nom)};
  const std::size_t S = 1 + rng() % 3;
  for (std::size_t s = 0; s < S; ++s) {
    auto f = synthetic_capacity_factors(kAllSources[s], T, seed * 7 + s, rng() % 8760);
    c.inputs.ppa.push_back({f, 0.03 + 0.06 * u(rng)});
  }
  std::vector<double> base(T);
  for (auto& v : base) v = 0.2 + 0.8 * u(rng);
  c.inputs.ppa[0] = {CapacityFactorSeries::create(Source::Onshore, base), 0.03 + 0.06 * u(rng)};
  std::vector<double> demand(T);
  for (auto& v : demand) v = 2.0 + 6.0 * u(rng);
  c.inputs.demand = DemandSeries::create(demand);
  c.inputs.storage.enabled = u(rng) < 0.7;
  return c;
}

}  // namespace fixtures
