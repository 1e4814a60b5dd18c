#include "stackopt/degradation.hpp"

#include <cmath>

#include "stackopt/error.hpp"
#include "stackopt/kernels.hpp"

namespace stackopt {

void DegradationScenario::validate() const {
  const std::string label = "scenario '" + name + "': ";
  if (!(rho0 >= 0.0) || !std::isfinite(rho0)) throw Error(ErrorKind::OutOfRange, label + "rho0 must be >= 0");
  if (!(rho1 >= rho0) || !std::isfinite(rho1)) throw Error(ErrorKind::OutOfRange, label + "rho1 must be >= rho0");
  if (!(pi_infl > 0.0 && pi_infl <= 1.0)) throw Error(ErrorKind::OutOfRange, label + "pi_infl must lie in (0, 1]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::OutOfRange, label + "alpha must lie in [0, 1]");
}

DegradationScenario scenario_preset(std::string_view name, double alpha) {
  struct Scale {
    std::string_view name;
    double rho;
  };
  static constexpr Scale scales[] = {
      {"bottom_const", 2.5}, {"low_const", 5.0}, {"base_const", 7.5}, {"high_const", 10.0}, {"top_const", 12.5}};
  for (const auto& s : scales) {
    if (s.name == name) return {std::string(name), s.rho, s.rho, 1.0, alpha};
  }
  if (name.size() == 7 && name.substr(0, 5) == "infl_") {
    const std::string digits(name.substr(5));
    for (int p : {50, 60, 70, 80, 90}) {
      if (digits == std::to_string(p)) return {std::string(name), 7.5, 15.0, p / 100.0, alpha};
    }
  }
  throw Error(ErrorKind::Config, "unknown degradation scenario '" + std::string(name) + "'");
}

std::vector<std::string> scenario_preset_names() {
  return {"bottom_const", "low_const", "base_const", "high_const", "top_const",
          "infl_50",      "infl_60",   "infl_70",    "infl_80",    "infl_90"};
}

double degradation_rate(const DegradationScenario& s, double pi) {
  if (!(pi >= 0.0 && pi <= 1.0)) throw Error(ErrorKind::OutOfRange, "load fraction " + std::to_string(pi) + " outside [0, 1]");
  if (pi <= s.pi_infl) return s.rho0;
  return s.rho0 + (s.rho1 - s.rho0) / (1.0 - s.pi_infl) * (pi - s.pi_infl);
}

double annual_voltage_increase(const DegradationScenario& s, std::span<const double> pi, double dt, bool operating_only) {
  for (double p : pi) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::OutOfRange, "load profile value " + std::to_string(p) + " outside [0, 1]");
  }
  kernels::RateCurve curve{s.rho0, 0.0, 1.0};
  if (s.pi_infl < 1.0) curve = {s.rho0, (s.rho1 - s.rho0) / (1.0 - s.pi_infl), s.pi_infl};
  return kernels::rate_sum(pi, curve, operating_only) * dt * 1e-6;
}

double voltage_surcharge_at_load(double dU_star, double alpha, double pi) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::OutOfRange, "alpha outside [0, 1]");
  if (!(pi >= 0.0 && pi <= 1.0)) throw Error(ErrorKind::OutOfRange, "load fraction outside [0, 1]");
  // alpha*U + pi*(1-alpha)*U, arranged so that pi = 1 returns U exactly.
  return dU_star - (1.0 - pi) * (1.0 - alpha) * dU_star;
}

double voltage_to_energy(double dU) { return constants::kVoltToEnergy * dU; }

DegradationState DegradationState::fresh(std::size_t j_points) {
  DegradationState s;
  s.eps_surcharge_per_point.assign(j_points, 0.0);
  return s;
}

DegradationState apply_year(const DegradationState& state, double dU_star_year, double alpha, std::span<const double> fractions) {
  if (!(dU_star_year >= 0.0)) throw Error(ErrorKind::OutOfRange, "annual voltage increase must be >= 0");
  DegradationState next;
  next.cumulative_dU_star = state.cumulative_dU_star + dU_star_year;
  next.year_index = state.year_index + 1;
  next.eps_surcharge_per_point.resize(fractions.size());
  for (std::size_t j = 0; j < fractions.size(); ++j) {
    next.eps_surcharge_per_point[j] = voltage_to_energy(voltage_surcharge_at_load(next.cumulative_dU_star, alpha, fractions[j]));
  }
  return next;
}

double degradation_fraction(const DegradationState& state, double eps_nom_free) {
  if (!(eps_nom_free > 0.0)) throw Error(ErrorKind::OutOfRange, "nominal energy demand must be > 0");
  // The surcharge at pi = 1 equals the conversion of the cumulative
  // nominal-load voltage for every alpha.
  return voltage_to_energy(state.cumulative_dU_star) / eps_nom_free * 100.0;
}

std::vector<double> degraded_curve(std::span<const double> bol, const DegradationState& state) {
  if (bol.size() != state.eps_surcharge_per_point.size()) {
    throw Error(ErrorKind::LengthMismatch, "surcharge grid does not match the energy-demand grid");
  }
  std::vector<double> eps(bol.size());
  for (std::size_t j = 0; j < bol.size(); ++j) eps[j] = bol[j] + state.eps_surcharge_per_point[j];
  return eps;
}

}  // namespace stackopt
