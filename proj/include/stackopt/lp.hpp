#pragma once

// Linear programs in the form
//
//   minimize    c^T x
//   subject to  A_eq x  = b_eq
//               A_le x <= b_le
//               lo <= x <= hi      (lo may be -inf, hi may be +inf)
//
// plus an embedded bounded-variable revised simplex solver and a file-based
// adapter for external solvers.

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stackopt::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Term {
  std::size_t var;
  double coef;
};

// Row-compressed block of constraints sharing one sense.
class ConstraintBlock {
 public:
  std::size_t add_row(std::span<const Term> terms, double rhs);

  std::size_t rows() const { return rhs_.size(); }
  std::size_t nnz() const { return cols_.size(); }
  std::span<const std::size_t> row_cols(std::size_t i) const {
    return {cols_.data() + start_[i], start_[i + 1] - start_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {vals_.data() + start_[i], start_[i + 1] - start_[i]};
  }
  double rhs(std::size_t i) const { return rhs_[i]; }
  void set_rhs(std::size_t i, double value) { rhs_[i] = value; }
  std::span<const double> rhs() const { return rhs_; }
  // activity a_i . x
  double row_dot(std::size_t i, std::span<const double> x) const;

 private:
  std::vector<std::size_t> start_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
  std::vector<double> rhs_;
};

class LpInstance {
 public:
  std::size_t add_variable(std::string name, double lo, double hi, double cost = 0.0);
  std::size_t add_equality(std::span<const Term> terms, double rhs) { return eq_.add_row(terms, rhs); }
  std::size_t add_less_equal(std::span<const Term> terms, double rhs) { return le_.add_row(terms, rhs); }
  std::size_t add_equality(std::initializer_list<Term> terms, double rhs) {
    return eq_.add_row({terms.begin(), terms.size()}, rhs);
  }
  std::size_t add_less_equal(std::initializer_list<Term> terms, double rhs) {
    return le_.add_row({terms.begin(), terms.size()}, rhs);
  }

  void set_cost(std::size_t var, double cost) { cost_.at(var) = cost; }
  void set_bounds(std::size_t var, double lo, double hi);

  std::size_t num_variables() const { return cost_.size(); }
  std::size_t num_equalities() const { return eq_.rows(); }
  std::size_t num_inequalities() const { return le_.rows(); }

  std::span<const double> objective() const { return cost_; }
  std::span<const double> lower() const { return lo_; }
  std::span<const double> upper() const { return hi_; }
  const std::vector<std::string>& names() const { return names_; }
  const ConstraintBlock& equalities() const { return eq_; }
  const ConstraintBlock& inequalities() const { return le_; }
  ConstraintBlock& equalities() { return eq_; }
  ConstraintBlock& inequalities() { return le_; }

  double objective_value(std::span<const double> x) const;

  // Throws Error(OutOfRange/LengthMismatch) when column indices are out of
  // range, a rhs is not finite or some lo > hi.
  void validate() const;

 private:
  std::vector<double> cost_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<std::string> names_;
  ConstraintBlock eq_;
  ConstraintBlock le_;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, NumericalBreakdown };

std::string_view to_string(Status status);

struct LpSolution {
  Status status = Status::NumericalBreakdown;
  std::vector<double> x;
  double objective = 0.0;
  // Shadow prices d(objective)/d(rhs); inequality duals are <= 0.
  std::vector<double> eq_duals;
  std::vector<double> le_duals;
  std::size_t iterations = 0;
  std::string message;
};

struct SolverOptions {
  double tol = 1e-7;
  std::size_t max_iters = 0;  // 0: 50 * (variables + constraints)
  bool scale = true;
  std::size_t refactor_interval = 100;
};

LpSolution solve_lp(const LpInstance& instance, const SolverOptions& options = {});

struct ResidualReport {
  double primal_residual = 0.0;  // max constraint/bound violation
  double dual_residual = 0.0;    // max sign violation of duals / reduced costs
  double duality_gap = 0.0;      // |primal - dual| / (1 + |primal|)
  double primal_objective = 0.0;
  double dual_objective = 0.0;
};

ResidualReport check_optimality(const LpInstance& instance, const LpSolution& solution);

// Plain-text sparse exchange format; see docs in dump.cpp.
void write_dump(std::ostream& out, const LpInstance& instance);
LpInstance read_dump(std::istream& in);
void write_solution(std::ostream& out, const LpSolution& solution);
LpSolution read_solution(std::istream& in, std::size_t num_vars, std::size_t num_eq, std::size_t num_le);

// Narrow solver interface used by the dispatch layer.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual LpSolution solve(const LpInstance& instance) const = 0;
  virtual std::string name() const = 0;
};

class EmbeddedSolver final : public Solver {
 public:
  explicit EmbeddedSolver(SolverOptions options = {}) : options_(options) {}
  LpSolution solve(const LpInstance& instance) const override { return solve_lp(instance, options_); }
  std::string name() const override { return "embedded-simplex"; }

 private:
  SolverOptions options_;
};

// Runs `command_template` through the shell after substituting `{in}` with a
// dump of the instance and `{out}` with the path the solution must be
// written to (solution format of write_solution).
class ExternalSolver final : public Solver {
 public:
  ExternalSolver(std::string command_template, std::filesystem::path work_dir);
  LpSolution solve(const LpInstance& instance) const override;
  std::string name() const override { return "external"; }

 private:
  std::string command_template_;
  std::filesystem::path work_dir_;
};

}  // namespace stackopt::lp
