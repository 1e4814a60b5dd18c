// Bounded-variable revised simplex.
//
// Every row i gets a logical variable s_i with column -e_i, so the working
// system is A x - s = 0 with s_i bounded by the row sense ([b,b] for
// equalities, (-inf,b] for inequalities). Rows whose logical starts outside
// its bounds receive an artificial variable; phase 1 minimises their sum.
// The basis is kept as a sparse LU (Eigen) plus product-form eta updates and
// refactorised every `refactor_interval` pivots.

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdint>

#include "stackopt/kernels.hpp"
#include "stackopt/lp.hpp"

namespace stackopt::lp {
namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr double kPrimalTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-14;
constexpr std::size_t kDegenerateLimit = 30;

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, AtZero, Fixed };

struct Breakdown {
  std::string what;
};

double round_pow2(double f) { return std::exp2(std::round(std::log2(f))); }

class RevisedSimplex {
 public:
  RevisedSimplex(const LpInstance& instance, const SolverOptions& options);
  LpSolution solve();

 private:
  enum class Outcome { Optimal, Unbounded, IterationLimit };

  void build_matrix();
  void compute_scaling();
  void setup_variables();
  void crash_basis();

  template <class F>
  void for_column(std::size_t j, F&& f) const {
    if (j < n_) {
      for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) f(row_idx_[k], val_[k]);
    } else if (j < n_ + m_) {
      f(j - n_, -1.0);
    } else {
      std::size_t a = j - n_ - m_;
      f(art_row_[a], art_sign_[a]);
    }
  }
  double column_dot(std::size_t j, const std::vector<double>& y) const {
    double acc = 0.0;
    for_column(j, [&](std::size_t i, double v) { acc += v * y[i]; });
    return acc;
  }

  void factorize();
  void ftran(std::vector<double>& v) const;
  void btran(std::vector<double>& v) const;
  void recompute_basic_values();
  Outcome run_phase(const std::vector<double>& cost);
  double nonbasic_value(std::size_t j) const;

  const LpInstance& inst_;
  SolverOptions opt_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t n_eq_ = 0;
  std::size_t total_ = 0;
  std::size_t max_iters_ = 0;
  std::size_t iterations_ = 0;

  std::vector<std::size_t> col_ptr_;
  std::vector<std::size_t> row_idx_;
  std::vector<double> val_;
  std::vector<double> row_scale_;
  std::vector<double> col_scale_;
  std::vector<double> row_lo_;
  std::vector<double> row_hi_;

  std::vector<std::size_t> art_row_;
  std::vector<double> art_sign_;

  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> cost_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<std::size_t> head_;
  std::vector<std::size_t> pos_;
  std::vector<double> xb_;

  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  struct Eta {
    std::size_t pos;
    double pivot;
    std::vector<std::size_t> idx;
    std::vector<double> val;
  };
  std::vector<Eta> etas_;
};

RevisedSimplex::RevisedSimplex(const LpInstance& instance, const SolverOptions& options)
    : inst_(instance), opt_(options) {
  n_ = inst_.num_variables();
  n_eq_ = inst_.num_equalities();
  m_ = n_eq_ + inst_.num_inequalities();
  max_iters_ = opt_.max_iters != 0 ? opt_.max_iters : 50 * (n_ + m_);
  if (opt_.refactor_interval == 0) opt_.refactor_interval = 1;
}

void RevisedSimplex::build_matrix() {
  // Row-major blocks -> CSC, summing duplicate (row, col) entries.
  std::vector<std::size_t> count(n_ + 1, 0);
  auto blocks = {&inst_.equalities(), &inst_.inequalities()};
  for (const ConstraintBlock* b : blocks) {
    for (std::size_t i = 0; i < b->rows(); ++i) {
      for (std::size_t c : b->row_cols(i)) ++count[c + 1];
    }
  }
  for (std::size_t j = 0; j < n_; ++j) count[j + 1] += count[j];
  std::vector<std::size_t> fill(count.begin(), count.end() - 1);
  std::vector<std::size_t> rows(count[n_]);
  std::vector<double> vals(count[n_]);
  std::size_t row_offset = 0;
  for (const ConstraintBlock* b : blocks) {
    for (std::size_t i = 0; i < b->rows(); ++i) {
      auto cols = b->row_cols(i);
      auto v = b->row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        rows[fill[cols[k]]] = row_offset + i;
        vals[fill[cols[k]]] = v[k];
        ++fill[cols[k]];
      }
    }
    row_offset += b->rows();
  }
  col_ptr_.assign(1, 0);
  for (std::size_t j = 0; j < n_; ++j) {
    // entries of a column arrive in increasing row order; merge equal rows
    for (std::size_t k = count[j]; k < count[j + 1]; ++k) {
      if (!row_idx_.empty() && row_idx_.size() > col_ptr_.back() && row_idx_.back() == rows[k]) {
        val_.back() += vals[k];
      } else {
        row_idx_.push_back(rows[k]);
        val_.push_back(vals[k]);
      }
    }
    col_ptr_.push_back(row_idx_.size());
  }
}

void RevisedSimplex::compute_scaling() {
  row_scale_.assign(m_, 1.0);
  col_scale_.assign(n_, 1.0);
  if (!opt_.scale) return;
  for (int pass = 0; pass < 4; ++pass) {
    std::vector<double> rmin(m_, kInf), rmax(m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
        double a = std::fabs(val_[k]) * row_scale_[row_idx_[k]] * col_scale_[j];
        if (a == 0.0) continue;
        rmin[row_idx_[k]] = std::min(rmin[row_idx_[k]], a);
        rmax[row_idx_[k]] = std::max(rmax[row_idx_[k]], a);
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (rmax[i] > 0.0) row_scale_[i] *= round_pow2(1.0 / std::sqrt(rmin[i] * rmax[i]));
    }
    for (std::size_t j = 0; j < n_; ++j) {
      double cmin = kInf, cmax = 0.0;
      for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
        double a = std::fabs(val_[k]) * row_scale_[row_idx_[k]] * col_scale_[j];
        if (a == 0.0) continue;
        cmin = std::min(cmin, a);
        cmax = std::max(cmax, a);
      }
      if (cmax > 0.0) col_scale_[j] *= round_pow2(1.0 / std::sqrt(cmin * cmax));
    }
  }
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) val_[k] *= row_scale_[row_idx_[k]] * col_scale_[j];
  }
}

void RevisedSimplex::setup_variables() {
  row_lo_.resize(m_);
  row_hi_.resize(m_);
  for (std::size_t i = 0; i < n_eq_; ++i) {
    row_lo_[i] = row_hi_[i] = inst_.equalities().rhs(i) * row_scale_[i];
  }
  for (std::size_t i = n_eq_; i < m_; ++i) {
    row_lo_[i] = -kInf;
    row_hi_[i] = inst_.inequalities().rhs(i - n_eq_) * row_scale_[i];
  }
  lo_.resize(n_ + m_);
  hi_.resize(n_ + m_);
  cost_.assign(n_ + m_, 0.0);
  auto lo = inst_.lower();
  auto hi = inst_.upper();
  auto c = inst_.objective();
  for (std::size_t j = 0; j < n_; ++j) {
    lo_[j] = lo[j] / col_scale_[j];
    hi_[j] = hi[j] / col_scale_[j];
    cost_[j] = c[j] * col_scale_[j];
  }
  for (std::size_t i = 0; i < m_; ++i) {
    lo_[n_ + i] = row_lo_[i];
    hi_[n_ + i] = row_hi_[i];
  }
}

double RevisedSimplex::nonbasic_value(std::size_t j) const {
  switch (state_[j]) {
    case VarState::AtLower:
    case VarState::Fixed: return lo_[j];
    case VarState::AtUpper: return hi_[j];
    default: return 0.0;
  }
}

void RevisedSimplex::crash_basis() {
  state_.assign(n_ + m_, VarState::AtZero);
  x_.assign(n_ + m_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    if (lo_[j] == hi_[j]) state_[j] = VarState::Fixed;
    else if (std::isfinite(lo_[j])) state_[j] = VarState::AtLower;
    else if (std::isfinite(hi_[j])) state_[j] = VarState::AtUpper;
    x_[j] = nonbasic_value(j);
  }
  std::vector<double> activity(m_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) activity[row_idx_[k]] += val_[k] * x_[j];
  }
  head_.assign(m_, kNone);
  xb_.assign(m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t s = n_ + i;
    double act = activity[i];
    if (act >= row_lo_[i] - kPrimalTol && act <= row_hi_[i] + kPrimalTol) {
      state_[s] = VarState::Basic;
      head_[i] = s;
      xb_[i] = act;
      continue;
    }
    double target = act < row_lo_[i] ? row_lo_[i] : row_hi_[i];
    state_[s] = row_lo_[i] == row_hi_[i] ? VarState::Fixed : (act < row_lo_[i] ? VarState::AtLower : VarState::AtUpper);
    x_[s] = target;
    art_row_.push_back(i);
    art_sign_.push_back(target > act ? 1.0 : -1.0);
    head_[i] = kNone;  // filled below
    xb_[i] = std::fabs(target - act);
  }
  const std::size_t n_art = art_row_.size();
  total_ = n_ + m_ + n_art;
  lo_.resize(total_, 0.0);
  hi_.resize(total_, kInf);
  cost_.resize(total_, 0.0);
  x_.resize(total_, 0.0);
  state_.resize(total_, VarState::Basic);
  for (std::size_t a = 0; a < n_art; ++a) head_[art_row_[a]] = n_ + m_ + a;
  pos_.assign(total_, kNone);
  for (std::size_t i = 0; i < m_; ++i) pos_[head_[i]] = i;
}

void RevisedSimplex::factorize() {
  etas_.clear();
  if (m_ == 0) return;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m_ * 3);
  for (std::size_t p = 0; p < m_; ++p) {
    for_column(head_[p], [&](std::size_t i, double v) {
      trip.emplace_back(static_cast<int>(i), static_cast<int>(p), v);
    });
  }
  Eigen::SparseMatrix<double> basis(static_cast<int>(m_), static_cast<int>(m_));
  basis.setFromTriplets(trip.begin(), trip.end());
  basis.makeCompressed();
  lu_.compute(basis);
  if (lu_.info() != Eigen::Success) throw Breakdown{"basis factorization failed: " + lu_.lastErrorMessage()};
  etas_.clear();
}

void RevisedSimplex::ftran(std::vector<double>& v) const {
  if (m_ == 0) return;
  Eigen::Map<Eigen::VectorXd> map(v.data(), static_cast<Eigen::Index>(m_));
  Eigen::VectorXd sol = lu_.solve(map);
  map = sol;
  for (const Eta& e : etas_) {
    double pivot_value = v[e.pos] / e.pivot;
    if (pivot_value != 0.0) {
      for (std::size_t k = 0; k < e.idx.size(); ++k) v[e.idx[k]] -= e.val[k] * pivot_value;
    }
    v[e.pos] = pivot_value;
  }
}

void RevisedSimplex::btran(std::vector<double>& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double acc = v[it->pos];
    for (std::size_t k = 0; k < it->idx.size(); ++k) acc -= it->val[k] * v[it->idx[k]];
    v[it->pos] = acc / it->pivot;
  }
  Eigen::Map<Eigen::VectorXd> map(v.data(), static_cast<Eigen::Index>(m_));
  Eigen::VectorXd sol = lu_.transpose().solve(map);
  map = sol;
}

void RevisedSimplex::recompute_basic_values() {
  std::vector<double> rhs(m_, 0.0);
  for (std::size_t j = 0; j < total_; ++j) {
    if (state_[j] == VarState::Basic) continue;
    double xj = x_[j];
    if (xj == 0.0) continue;
    for_column(j, [&](std::size_t i, double v) { rhs[i] -= v * xj; });
  }
  ftran(rhs);
  xb_ = std::move(rhs);
}

RevisedSimplex::Outcome RevisedSimplex::run_phase(const std::vector<double>& cost) {
  double cmax = 0.0;
  for (double c : cost) cmax = std::max(cmax, std::fabs(c));
  const double dual_tol = 1e-9 * std::max(1.0, cmax);

  std::vector<double> y(m_);
  std::vector<double> w(m_);
  std::size_t degenerate_run = 0;
  bool bland = false;

  for (;;) {
    if (iterations_ >= max_iters_) return Outcome::IterationLimit;
    if (etas_.size() >= opt_.refactor_interval) {
      factorize();
      recompute_basic_values();
    }

    for (std::size_t p = 0; p < m_; ++p) y[p] = cost[head_[p]];
    btran(y);

    // Pricing: Dantzig, or Bland's smallest index while stalling.
    std::size_t q = kNone;
    double dir = 0.0;
    double best = 0.0;
    for (std::size_t j = 0; j < total_; ++j) {
      VarState st = state_[j];
      if (st == VarState::Basic || st == VarState::Fixed) continue;
      double d = cost[j] - column_dot(j, y);
      double score = 0.0;
      double jdir = 0.0;
      if (st == VarState::AtLower) {
        if (d < -dual_tol) score = -d, jdir = 1.0;
      } else if (st == VarState::AtUpper) {
        if (d > dual_tol) score = d, jdir = -1.0;
      } else if (std::fabs(d) > dual_tol) {
        score = std::fabs(d);
        jdir = d < 0.0 ? 1.0 : -1.0;
      }
      if (jdir == 0.0) continue;
      if (bland) {
        q = j;
        dir = jdir;
        break;
      }
      if (score > best) {
        best = score;
        q = j;
        dir = jdir;
      }
    }
    if (q == kNone) return Outcome::Optimal;

    std::fill(w.begin(), w.end(), 0.0);
    for_column(q, [&](std::size_t i, double v) { w[i] += v; });
    ftran(w);

    // Ratio test. Basic value at position i moves with rate -dir * w[i].
    const double range = hi_[q] - lo_[q];
    std::size_t r = kNone;
    double theta = kInf;
    bool to_upper = false;
    if (!bland) {
      double theta_max = kInf;
      for (std::size_t i = 0; i < m_; ++i) {
        if (std::fabs(w[i]) <= kPivotTol) continue;
        std::size_t b = head_[i];
        double rate = -dir * w[i];
        if (rate < 0.0 && std::isfinite(lo_[b])) theta_max = std::min(theta_max, (xb_[i] - lo_[b] + kPrimalTol) / -rate);
        if (rate > 0.0 && std::isfinite(hi_[b])) theta_max = std::min(theta_max, (hi_[b] - xb_[i] + kPrimalTol) / rate);
      }
      double best_pivot = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (std::fabs(w[i]) <= kPivotTol) continue;
        std::size_t b = head_[i];
        double rate = -dir * w[i];
        double t = kInf;
        bool upper = false;
        if (rate < 0.0 && std::isfinite(lo_[b])) t = (xb_[i] - lo_[b]) / -rate;
        else if (rate > 0.0 && std::isfinite(hi_[b])) t = (hi_[b] - xb_[i]) / rate, upper = true;
        if (!std::isfinite(t) || t > theta_max) continue;
        double piv = std::fabs(w[i]);
        if (piv > best_pivot || (piv == best_pivot && r != kNone && b < head_[r])) {
          best_pivot = piv;
          r = i;
          theta = t;
          to_upper = upper;
        }
      }
    } else {
      for (std::size_t i = 0; i < m_; ++i) {
        if (std::fabs(w[i]) <= kPivotTol) continue;
        std::size_t b = head_[i];
        double rate = -dir * w[i];
        double t = kInf;
        bool upper = false;
        if (rate < 0.0 && std::isfinite(lo_[b])) t = (xb_[i] - lo_[b]) / -rate;
        else if (rate > 0.0 && std::isfinite(hi_[b])) t = (hi_[b] - xb_[i]) / rate, upper = true;
        if (!std::isfinite(t)) continue;
        t = std::max(t, 0.0);
        bool tie = r != kNone && std::fabs(t - theta) <= 1e-12 * (1.0 + theta);
        if (r == kNone || (t < theta && !tie) || (tie && b < head_[r])) {
          r = i;
          theta = t;
          to_upper = upper;
        }
      }
    }

    const bool flip = std::isfinite(range) && (r == kNone || range <= theta);
    if (!flip && r == kNone) return Outcome::Unbounded;
    if (flip) theta = range;
    theta = std::max(theta, 0.0);

    kernels::axpy(-dir * theta, w, xb_);
    const double entering_value = nonbasic_value(q) + dir * theta;
    if (flip) {
      state_[q] = dir > 0.0 ? VarState::AtUpper : VarState::AtLower;
      x_[q] = nonbasic_value(q);
    } else {
      std::size_t leaving = head_[r];
      if (lo_[leaving] == hi_[leaving]) state_[leaving] = VarState::Fixed;
      else state_[leaving] = to_upper ? VarState::AtUpper : VarState::AtLower;
      x_[leaving] = nonbasic_value(leaving);
      pos_[leaving] = kNone;

      Eta eta{r, w[r], {}, {}};
      for (std::size_t i = 0; i < m_; ++i) {
        if (i != r && std::fabs(w[i]) > kDropTol) {
          eta.idx.push_back(i);
          eta.val.push_back(w[i]);
        }
      }
      etas_.push_back(std::move(eta));
      head_[r] = q;
      pos_[q] = r;
      state_[q] = VarState::Basic;
      xb_[r] = entering_value;
    }

    ++iterations_;
    if (theta <= 1e-12) {
      if (++degenerate_run > kDegenerateLimit) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

LpSolution RevisedSimplex::solve() {
  LpSolution sol;
  sol.x.assign(n_, 0.0);
  build_matrix();
  compute_scaling();
  setup_variables();
  crash_basis();

  auto finish = [&](Status status, std::string message) {
    sol.status = status;
    sol.iterations = iterations_;
    sol.message = std::move(message);
    return sol;
  };

  try {
    factorize();
    if (!art_row_.empty()) {
      std::vector<double> phase1_cost(total_, 0.0);
      for (std::size_t a = n_ + m_; a < total_; ++a) phase1_cost[a] = 1.0;
      Outcome out = run_phase(phase1_cost);
      if (out == Outcome::IterationLimit) return finish(Status::IterationLimit, "phase 1 iteration limit");
      if (out == Outcome::Unbounded) return finish(Status::NumericalBreakdown, "phase 1 reported unbounded");
      factorize();
      recompute_basic_values();
      double infeasibility = 0.0;
      double scale = 1.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (std::isfinite(row_lo_[i])) scale = std::max(scale, std::fabs(row_lo_[i]));
        if (std::isfinite(row_hi_[i])) scale = std::max(scale, std::fabs(row_hi_[i]));
      }
      for (std::size_t a = n_ + m_; a < total_; ++a) {
        infeasibility += state_[a] == VarState::Basic ? std::fabs(xb_[pos_[a]]) : x_[a];
      }
      if (infeasibility > opt_.tol * scale) {
        return finish(Status::Infeasible, "phase 1 optimum has residual infeasibility " + std::to_string(infeasibility));
      }
      for (std::size_t a = n_ + m_; a < total_; ++a) {
        hi_[a] = 0.0;
        if (state_[a] != VarState::Basic) {
          state_[a] = VarState::Fixed;
          x_[a] = 0.0;
        }
      }
    }

    Outcome out = run_phase(cost_);
    if (out == Outcome::IterationLimit) return finish(Status::IterationLimit, "phase 2 iteration limit");
    if (out == Outcome::Unbounded) return finish(Status::Unbounded, "unbounded ray found in phase 2");

    factorize();
    recompute_basic_values();
    std::vector<double> y(m_);
    for (std::size_t p = 0; p < m_; ++p) y[p] = cost_[head_[p]];
    btran(y);

    for (std::size_t j = 0; j < n_; ++j) {
      double xs = state_[j] == VarState::Basic ? xb_[pos_[j]] : x_[j];
      sol.x[j] = xs * col_scale_[j];
    }
    sol.eq_duals.resize(n_eq_);
    sol.le_duals.resize(m_ - n_eq_);
    for (std::size_t i = 0; i < m_; ++i) {
      double dual = y[i] * row_scale_[i];
      if (i < n_eq_) sol.eq_duals[i] = dual;
      else sol.le_duals[i - n_eq_] = dual;
    }
    sol.objective = inst_.objective_value(sol.x);
    return finish(Status::Optimal, "");
  } catch (const Breakdown& b) {
    return finish(Status::NumericalBreakdown, b.what);
  }
}

}  // namespace

LpSolution solve_lp(const LpInstance& instance, const SolverOptions& options) {
  instance.validate();
  RevisedSimplex simplex(instance, options);
  LpSolution sol = simplex.solve();
  if (sol.status != Status::Optimal) return sol;

  // Never hand back an Optimal that fails its own certificate.
  ResidualReport report = check_optimality(instance, sol);
  double rhs_norm = 0.0;
  for (double b : instance.equalities().rhs()) rhs_norm = std::max(rhs_norm, std::fabs(b));
  for (double b : instance.inequalities().rhs()) rhs_norm = std::max(rhs_norm, std::fabs(b));
  if (!(report.primal_residual <= options.tol * (1.0 + rhs_norm))) {
    sol.status = Status::NumericalBreakdown;
    sol.message = "primal residual " + std::to_string(report.primal_residual) + " exceeds tolerance";
  }
  return sol;
}

}  // namespace stackopt::lp
