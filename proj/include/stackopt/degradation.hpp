#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stackopt {

namespace constants {
inline constexpr double kFaraday = 96485.0;        // C/mol
inline constexpr double kMolarMassH2 = 2.016e-3;   // kg/mol
inline constexpr double kJoulePerKwh = 3.6e6;
// 2F / M_H2 in kWh/(kg V)
inline constexpr double kVoltToEnergy = 2.0 * kFaraday / kMolarMassH2 / kJoulePerKwh;
}  // namespace constants

// Load-dependent degradation rate: rho0 up to the inflection load, then a
// linear rise to rho1 at nominal load. pi_infl = 1 is the constant-rate case.
struct DegradationScenario {
  std::string name;
  double rho0 = 7.5;     // uV/h
  double rho1 = 7.5;     // uV/h
  double pi_infl = 1.0;
  double alpha = 0.4125;  // shift share of the voltage surcharge

  void validate() const;
  bool is_constant() const { return pi_infl >= 1.0 || rho1 == rho0; }
};

// bottom_const, low_const, base_const, high_const, top_const, infl_50 .. infl_90.
DegradationScenario scenario_preset(std::string_view name, double alpha = 0.4125);
std::vector<std::string> scenario_preset_names();

// uV/h
double degradation_rate(const DegradationScenario& scenario, double pi);

// Sum of rho(pi_t) * dt over the profile, in V. With operating_only set,
// hours at pi = 0 do not accrue.
double annual_voltage_increase(const DegradationScenario& scenario, std::span<const double> pi_profile, double dt,
                               bool operating_only = false);

// Surcharge at load pi for a nominal-load surcharge dU_star (V).
double voltage_surcharge_at_load(double dU_star, double alpha, double pi);

// kWh/kg
double voltage_to_energy(double dU);

struct DegradationState {
  double cumulative_dU_star = 0.0;            // V
  std::size_t year_index = 1;                 // year described by the surcharges
  std::vector<double> eps_surcharge_per_point;  // kWh/kg

  static DegradationState fresh(std::size_t j_points);
};

DegradationState apply_year(const DegradationState& state, double dU_star_year, double alpha,
                            std::span<const double> fractions);

// Percentage increase of the nominal-load energy demand.
double degradation_fraction(const DegradationState& state, double eps_nom_free);

// eps_j + surcharge_j
std::vector<double> degraded_curve(std::span<const double> bol, const DegradationState& state);

}  // namespace stackopt
