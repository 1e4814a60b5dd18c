#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stackopt {

struct EconomicTerms {
  double capex = 1252.345;      // EUR/kW
  double share_peri = 0.75;
  double share_stacks = 0.25;
  double opex_fix = 23.45;      // EUR/(kW a)
  double t_dep_peri = 20.0;     // a
  double interest = 0.07;
  double water_cost = 3.725;    // EUR/m3
  double water_per_kg = 14.0;   // kg H2O per kg H2

  void validate() const;
};

inline constexpr double kWaterDensity = 1000.0;  // kg/m3

// Capital recovery factor; r = 0 yields the limit 1/t.
double annuity_factor(double rate, double years);

double peripheral_cost_year(const EconomicTerms& terms, double p_nom, double annual_h2_kg);
double stack_cost_year(const EconomicTerms& terms, double p_nom, double lifetime_years);

struct YearCosts {
  double c_ppa = 0.0;
  double c_storage = 0.0;
  double r_surplus = 0.0;
  double c_peri = 0.0;
  double c_stacks = 0.0;

  double total() const { return c_ppa + c_storage - r_surplus + c_peri + c_stacks; }
};

// Per-component contributions; the surplus entry carries a negative sign.
struct ComponentValues {
  double ppa = 0.0;
  double storage = 0.0;
  double surplus = 0.0;
  double peri = 0.0;
  double stacks = 0.0;

  double sum() const { return ppa + storage + surplus + peri + stacks; }
};

enum class LcohMode {
  Averaged,    // lifetime cost / lifetime hydrogen
  LiteralSum,  // sum over years of yearly cost / annual hydrogen
};

struct LcohBreakdown {
  std::vector<YearCosts> years;
  YearCosts totals;
  double annual_demand_mass = 0.0;  // kg
  double lcoh_av = 0.0;             // EUR/kg
  ComponentValues component_lcoh;   // EUR/kg, sums to lcoh_av
  ComponentValues shares;           // fractions of lcoh_av, sum to 1
};

LcohBreakdown lcoh(std::span<const YearCosts> year_records, double annual_demand_mass, std::size_t eol_years,
                   LcohMode mode = LcohMode::Averaged);

}  // namespace stackopt
