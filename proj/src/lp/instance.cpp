#include <cmath>

#include "stackopt/error.hpp"
#include "stackopt/lp.hpp"

namespace stackopt::lp {

std::size_t ConstraintBlock::add_row(std::span<const Term> terms, double rhs) {
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    cols_.push_back(t.var);
    vals_.push_back(t.coef);
  }
  start_.push_back(cols_.size());
  rhs_.push_back(rhs);
  return rhs_.size() - 1;
}

double ConstraintBlock::row_dot(std::size_t i, std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t k = start_[i]; k < start_[i + 1]; ++k) acc += vals_[k] * x[cols_[k]];
  return acc;
}

std::size_t LpInstance::add_variable(std::string name, double lo, double hi, double cost) {
  cost_.push_back(cost);
  lo_.push_back(lo);
  hi_.push_back(hi);
  names_.push_back(std::move(name));
  return cost_.size() - 1;
}

void LpInstance::set_bounds(std::size_t var, double lo, double hi) {
  lo_.at(var) = lo;
  hi_.at(var) = hi;
}

double LpInstance::objective_value(std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < cost_.size(); ++j) acc += cost_[j] * x[j];
  return acc;
}

void LpInstance::validate() const {
  const std::size_t n = num_variables();
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lo_[j]) || std::isnan(hi_[j]) || lo_[j] > hi_[j] || lo_[j] == kInf || hi_[j] == -kInf) {
      throw Error(ErrorKind::OutOfRange, "variable '" + names_[j] + "' has invalid bounds");
    }
    if (!std::isfinite(cost_[j])) throw Error(ErrorKind::OutOfRange, "variable '" + names_[j] + "' has non-finite cost");
  }
  auto check_block = [n](const ConstraintBlock& block, const char* label) {
    for (std::size_t i = 0; i < block.rows(); ++i) {
      if (!std::isfinite(block.rhs(i))) {
        throw Error(ErrorKind::OutOfRange, std::string(label) + " row " + std::to_string(i) + " has non-finite rhs");
      }
      auto cols = block.row_cols(i);
      auto vals = block.row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (cols[k] >= n) {
          throw Error(ErrorKind::LengthMismatch,
                      std::string(label) + " row " + std::to_string(i) + " references column " + std::to_string(cols[k]));
        }
        if (!std::isfinite(vals[k])) {
          throw Error(ErrorKind::OutOfRange, std::string(label) + " row " + std::to_string(i) + " has non-finite coefficient");
        }
      }
    }
  };
  check_block(eq_, "equality");
  check_block(le_, "inequality");
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::IterationLimit: return "IterationLimit";
    case Status::NumericalBreakdown: return "NumericalBreakdown";
  }
  return "Unknown";
}

}  // namespace stackopt::lp
