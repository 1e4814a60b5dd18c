#include <algorithm>
#include <cmath>

#include "stackopt/error.hpp"
#include "stackopt/lp.hpp"

namespace stackopt::lp {

ResidualReport check_optimality(const LpInstance& instance, const LpSolution& solution) {
  const std::size_t n = instance.num_variables();
  const ConstraintBlock& eq = instance.equalities();
  const ConstraintBlock& le = instance.inequalities();
  if (solution.x.size() != n || solution.eq_duals.size() != eq.rows() || solution.le_duals.size() != le.rows()) {
    throw Error(ErrorKind::LengthMismatch, "solution dimensions do not match the instance");
  }
  ResidualReport report;
  const auto x = std::span<const double>(solution.x);
  auto lo = instance.lower();
  auto hi = instance.upper();

  double primal = 0.0;
  for (std::size_t i = 0; i < eq.rows(); ++i) primal = std::max(primal, std::fabs(eq.row_dot(i, x) - eq.rhs(i)));
  for (std::size_t i = 0; i < le.rows(); ++i) primal = std::max(primal, le.row_dot(i, x) - le.rhs(i));
  for (std::size_t j = 0; j < n; ++j) {
    primal = std::max(primal, lo[j] - x[j]);
    primal = std::max(primal, x[j] - hi[j]);
  }
  report.primal_residual = primal;

  // Reduced costs d = c - A^T y.
  std::vector<double> d(instance.objective().begin(), instance.objective().end());
  auto subtract = [&](const ConstraintBlock& block, const std::vector<double>& y) {
    for (std::size_t i = 0; i < block.rows(); ++i) {
      auto cols = block.row_cols(i);
      auto vals = block.row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) d[cols[k]] -= vals[k] * y[i];
    }
  };
  subtract(eq, solution.eq_duals);
  subtract(le, solution.le_duals);

  double dual_res = 0.0;
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < eq.rows(); ++i) dual_obj += eq.rhs(i) * solution.eq_duals[i];
  for (std::size_t i = 0; i < le.rows(); ++i) {
    dual_res = std::max(dual_res, solution.le_duals[i]);
    dual_obj += le.rhs(i) * solution.le_duals[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lo[j])) dual_res = std::max(dual_res, d[j]);
    if (!std::isfinite(hi[j])) dual_res = std::max(dual_res, -d[j]);
    if (d[j] > 0.0 && std::isfinite(lo[j])) dual_obj += d[j] * lo[j];
    if (d[j] < 0.0 && std::isfinite(hi[j])) dual_obj += d[j] * hi[j];
  }
  report.dual_residual = dual_res;
  report.primal_objective = instance.objective_value(x);
  report.dual_objective = dual_obj;
  report.duality_gap = std::fabs(report.primal_objective - dual_obj) / (1.0 + std::fabs(report.primal_objective));
  return report;
}

}  // namespace stackopt::lp
