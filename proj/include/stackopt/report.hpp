#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stackopt/dispatch.hpp"
#include "stackopt/lifecycle.hpp"
#include "stackopt/sweep.hpp"

namespace stackopt {

// Fixed 6-significant-digit formatting used by every writer; NaN prints "nan".
std::string format_number(double value);

// year,R_start_percent,dU_star_V,c_ppa,c_storage,r_surplus
void write_lifecycle_csv(std::ostream& out, const LifecycleResult& result);
// eol_years,lcoh_av,share_ppa,share_storage,share_surplus,share_peri,share_stacks
void write_lifecycle_summary(std::ostream& out, const LifecycleResult& result);

// key,value rows: bookings per source, storage capacity, per-horizon and
// per-year cost components, objective and solver iterations.
void write_dispatch_summary(std::ostream& out, const DispatchSolution& solution);

// scenario,alpha,capex_eur_per_kw,R_percent,eol_years,lcoh_eur_per_kg,
// share_ppa,share_storage,share_surplus,share_peri,share_stacks,is_optimum,status
void write_sweep_csv(std::ostream& out, const SweepTable& table);
// One row per curve: scenario,alpha,capex_eur_per_kw,R_opt_percent,eol_opt_years,lcoh_opt_eur_per_kg,status
void write_optima_csv(std::ostream& out, const SweepTable& table);
// scenario,pi,rho_uV_per_h sampled on `points` equidistant loads in [0, 1].
void write_rate_curves(std::ostream& out, const std::vector<std::string>& presets, std::size_t points);

}  // namespace stackopt
