#include "stackopt/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "stackopt/degradation.hpp"
#include "stackopt/error.hpp"

namespace stackopt {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

namespace {

void shares_row(std::ostream& out, const ComponentValues& s) {
  out << format_number(s.ppa) << ',' << format_number(s.storage) << ',' << format_number(s.surplus) << ','
      << format_number(s.peri) << ',' << format_number(s.stacks);
}

}  // namespace

void write_lifecycle_csv(std::ostream& out, const LifecycleResult& result) {
  out << "year,R_start_percent,dU_star_V,c_ppa,c_storage,r_surplus\n";
  for (const auto& y : result.years) {
    out << y.year << ',' << format_number(y.r_start_percent) << ',' << format_number(y.dU_star) << ','
        << format_number(y.costs.c_ppa) << ',' << format_number(y.costs.c_storage) << ','
        << format_number(y.costs.r_surplus) << '\n';
  }
}

void write_lifecycle_summary(std::ostream& out, const LifecycleResult& result) {
  out << "eol_years,lcoh_av,share_ppa,share_storage,share_surplus,share_peri,share_stacks\n";
  out << result.eol_years << ',' << format_number(result.lcoh.lcoh_av) << ',';
  shares_row(out, result.lcoh.shares);
  out << '\n';
}

void write_dispatch_summary(std::ostream& out, const DispatchSolution& s) {
  out << "key,value\n";
  for (std::size_t i = 0; i < s.sources.size(); ++i) {
    out << "booking_" << to_string(s.sources[i]) << "_kw," << format_number(s.booking[i]) << '\n';
  }
  out << "storage_capacity_kg," << format_number(s.storage_capacity) << '\n';
  out << "c_ppa," << format_number(s.costs.c_ppa) << '\n';
  out << "c_storage," << format_number(s.costs.c_storage) << '\n';
  out << "r_surplus," << format_number(s.costs.r_surplus) << '\n';
  out << "annual_c_ppa," << format_number(s.annual_costs.c_ppa) << '\n';
  out << "annual_c_storage," << format_number(s.annual_costs.c_storage) << '\n';
  out << "annual_r_surplus," << format_number(s.annual_costs.r_surplus) << '\n';
  out << "objective," << format_number(s.objective) << '\n';
  out << "iterations," << s.iterations << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "scenario,alpha,capex_eur_per_kw,R_percent,eol_years,lcoh_eur_per_kg,"
         "share_ppa,share_storage,share_surplus,share_peri,share_stacks,is_optimum,status\n";
  for (const auto& r : table.records()) {
    const CurvePoint& p = r.point;
    out << r.scenario << ',' << format_number(r.alpha) << ',' << format_number(r.capex) << ','
        << format_number(p.threshold) << ',' << p.eol_years << ',' << format_number(p.lcoh) << ',';
    shares_row(out, p.shares);
    out << ',' << (r.is_optimum ? 1 : 0) << ',' << p.status << '\n';
  }
}

void write_optima_csv(std::ostream& out, const SweepTable& table) {
  out << "scenario,alpha,capex_eur_per_kw,R_opt_percent,eol_opt_years,lcoh_opt_eur_per_kg,status\n";
  for (const auto& c : table.curves) {
    out << c.scenario << ',' << format_number(c.alpha) << ',' << format_number(c.capex) << ',';
    if (c.optimum) {
      out << format_number(c.optimum->threshold) << ',' << c.optimum->eol_years << ','
          << format_number(c.optimum->lcoh) << ",ok\n";
    } else {
      out << "nan,0,nan,unreachable\n";
    }
  }
}

void write_rate_curves(std::ostream& out, const std::vector<std::string>& presets, std::size_t points) {
  if (points < 2) throw Error(ErrorKind::OutOfRange, "rate curves need at least two sample points");
  out << "scenario,pi,rho_uV_per_h\n";
  for (const auto& name : presets) {
    const auto s = scenario_preset(name);
    for (std::size_t i = 0; i < points; ++i) {
      const double pi = static_cast<double>(i) / static_cast<double>(points - 1);
      out << name << ',' << format_number(pi) << ',' << format_number(degradation_rate(s, pi)) << '\n';
    }
  }
}

}  // namespace stackopt
