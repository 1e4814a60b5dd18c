#include "stackopt/economics.hpp"

#include <cmath>
#include <string>

#include "stackopt/error.hpp"

namespace stackopt {

void EconomicTerms::validate() const {
  auto nonneg = [](double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::OutOfRange, std::string(what) + " must be >= 0");
  };
  nonneg(capex, "capex");
  nonneg(share_peri, "share_peri");
  nonneg(share_stacks, "share_stacks");
  nonneg(opex_fix, "opex_fix");
  nonneg(water_cost, "water_cost");
  nonneg(water_per_kg, "water_per_kg");
  if (std::fabs(share_peri + share_stacks - 1.0) > 1e-12) throw Error(ErrorKind::OutOfRange, "cost shares must sum to 1");
  if (!(interest > 0.0) || !std::isfinite(interest)) throw Error(ErrorKind::OutOfRange, "interest must be > 0");
  if (!(t_dep_peri >= 1.0)) throw Error(ErrorKind::OutOfRange, "t_dep_peri must be >= 1");
}

double annuity_factor(double rate, double years) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw Error(ErrorKind::OutOfRange, "annuity rate must be >= 0");
  if (!(years >= 1.0)) throw Error(ErrorKind::OutOfRange, "annuity period must be >= 1 year");
  if (rate == 0.0) return 1.0 / years;
  const double growth = std::pow(1.0 + rate, years);
  return rate * growth / (growth - 1.0);
}

double peripheral_cost_year(const EconomicTerms& t, double p_nom, double annual_h2_kg) {
  const double capex_part = p_nom * t.capex * t.share_peri * annuity_factor(t.interest, t.t_dep_peri);
  const double opex_part = p_nom * t.opex_fix;
  const double water_part = t.water_cost * t.water_per_kg / kWaterDensity * annual_h2_kg;
  return capex_part + opex_part + water_part;
}

double stack_cost_year(const EconomicTerms& t, double p_nom, double lifetime_years) {
  return p_nom * t.capex * t.share_stacks * annuity_factor(t.interest, lifetime_years);
}

LcohBreakdown lcoh(std::span<const YearCosts> year_records, double annual_demand_mass, std::size_t eol_years, LcohMode mode) {
  if (eol_years == 0 || year_records.empty()) throw Error(ErrorKind::EmptyLifetime, "no operating years to level");
  if (year_records.size() != eol_years) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(year_records.size()) + " year records for a " +
                                               std::to_string(eol_years) + "-year lifetime");
  }
  if (!(annual_demand_mass > 0.0)) throw Error(ErrorKind::OutOfRange, "annual hydrogen demand must be > 0");
  LcohBreakdown out;
  out.years.assign(year_records.begin(), year_records.end());
  out.annual_demand_mass = annual_demand_mass;
  for (const YearCosts& y : year_records) {
    out.totals.c_ppa += y.c_ppa;
    out.totals.c_storage += y.c_storage;
    out.totals.r_surplus += y.r_surplus;
    out.totals.c_peri += y.c_peri;
    out.totals.c_stacks += y.c_stacks;
  }
  const double denom = mode == LcohMode::Averaged ? static_cast<double>(eol_years) * annual_demand_mass : annual_demand_mass;
  out.component_lcoh = {out.totals.c_ppa / denom, out.totals.c_storage / denom, -out.totals.r_surplus / denom,
                        out.totals.c_peri / denom, out.totals.c_stacks / denom};
  out.lcoh_av = out.component_lcoh.sum();
  if (out.lcoh_av != 0.0) {
    const auto& c = out.component_lcoh;
    out.shares = {c.ppa / out.lcoh_av, c.storage / out.lcoh_av, c.surplus / out.lcoh_av, c.peri / out.lcoh_av,
                  c.stacks / out.lcoh_av};
  }
  return out;
}

}  // namespace stackopt
