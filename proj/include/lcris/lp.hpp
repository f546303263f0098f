#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "lcris/common.hpp"

namespace lcris {

/// Epigraph max-min problem over a box:
///   maximize   min_k  g_k(x),   g_k(x) = alpha[k] + beta.row(k) . x,
///   subject to lower <= x <= upper componentwise.
struct MaxMinLp {
  Eigen::VectorXd alpha;  // K
  Eigen::MatrixXd beta;   // K x N
  Eigen::VectorXd lower;  // N
  Eigen::VectorXd upper;  // N

  int rows() const { return static_cast<int>(alpha.size()); }
  int vars() const { return static_cast<int>(lower.size()); }

  void validate() const {
    if (rows() < 1 || vars() < 1) throw std::invalid_argument("MaxMinLp: empty problem");
    if (beta.rows() != rows() || beta.cols() != vars() || upper.size() != vars())
      throw std::invalid_argument("MaxMinLp: inconsistent dimensions");
    if (!alpha.allFinite() || !beta.allFinite() || !lower.allFinite() || !upper.allFinite())
      throw std::invalid_argument("MaxMinLp: coefficients must be finite");
    for (int n = 0; n < vars(); ++n)
      if (lower[n] > upper[n]) throw std::invalid_argument("MaxMinLp: empty box");
  }

  double eval_min(const Eigen::VectorXd& x) const {
    return (alpha + beta * x).minCoeff();
  }
};

enum class LpStatus { Optimal, Infeasible, NumericalFailure };

struct LpSolution {
  Eigen::VectorXd x;
  double slack = 0.0;
  LpStatus status = LpStatus::NumericalFailure;
};

/// Dense bounded-variable primal simplex on the epigraph form
///   max t  s.t.  t - beta_k . x + s_k = alpha_k,  s_k >= 0,  l <= x <= u.
///
/// The epigraph variable t is a free column that starts (and stays) basic, so
/// the initial basis {t, s_k : k != argmin_k g_k(l)} is feasible outright and
/// no phase-1 pass is needed. Rows are scaled to unit beta norm before
/// solving; Dantzig pricing with a Bland's-rule fallback handles degeneracy.
inline LpSolution solve_maxmin_lp(const MaxMinLp& problem) {
  problem.validate();
  const int kRows = problem.rows();
  const int nVars = problem.vars();
  const int tCol = nVars;             // epigraph column
  const int slack0 = nVars + 1;       // first slack column
  const int nCols = nVars + 1 + kRows;
  const double kInf = std::numeric_limits<double>::infinity();
  const double kOptTol = 1e-9;
  const double kPivTol = 1e-11;
  const double kDegenTol = 1e-11;
  const int kMaxIters = 50 * (nVars + kRows);

  // Two-stage scaling. A common factor maps the whole problem to unit gradient
  // scale (this multiplies the optimal slack, which is undone on return), then
  // each equality row is normalized toward unit beta norm with a clamp so the
  // epigraph column stays well conditioned even for nearly flat rows.
  double beta_max = 0.0;
  for (int k = 0; k < kRows; ++k) beta_max = std::max(beta_max, problem.beta.row(k).norm());
  const double common = beta_max > 1e-300 ? 1.0 / beta_max : 1.0;

  Eigen::VectorXd scale(kRows);
  for (int k = 0; k < kRows; ++k) {
    double nb = common * problem.beta.row(k).norm();
    scale[k] = 1.0 / std::max(nb, 1e-2);
  }

  Eigen::MatrixXd a(kRows, nCols);
  a.setZero();
  Eigen::VectorXd b(kRows);
  for (int k = 0; k < kRows; ++k) {
    a.block(k, 0, 1, nVars) = -(scale[k] * common) * problem.beta.row(k);
    a(k, tCol) = scale[k];
    a(k, slack0 + k) = 1.0;
    b[k] = (scale[k] * common) * problem.alpha[k];
  }

  Eigen::VectorXd lb(nCols), ub(nCols);
  lb.head(nVars) = problem.lower;
  ub.head(nVars) = problem.upper;
  lb[tCol] = -kInf;
  ub[tCol] = kInf;
  lb.segment(slack0, kRows).setZero();
  ub.segment(slack0, kRows).setConstant(kInf);

  enum class ColState { AtLower, AtUpper, Basic };
  std::vector<ColState> state(nCols, ColState::AtLower);

  // Initial basis: t plus every slack except the row that is tight at x = l.
  // (The per-row scale drops out of the tightness comparison only under the
  // common factor, so compare unscaled values.)
  int tight = 0;
  {
    Eigen::VectorXd g0 = problem.alpha + problem.beta * problem.lower;
    g0.minCoeff(&tight);
  }
  std::vector<int> basis;
  basis.reserve(kRows);
  basis.push_back(tCol);
  state[tCol] = ColState::Basic;
  for (int k = 0; k < kRows; ++k) {
    if (k == tight) continue;
    basis.push_back(slack0 + k);
    state[slack0 + k] = ColState::Basic;
  }

  auto nonbasic_value = [&](int j) {
    return state[j] == ColState::AtUpper ? ub[j] : lb[j];
  };

  Eigen::VectorXd xb(kRows);
  Eigen::MatrixXd bmat(kRows, kRows);
  bool bland = false;
  int degenerate_run = 0;

  for (int iter = 0;; ++iter) {
    if (iter > kMaxIters) {
      LpSolution fail;
      fail.status = LpStatus::NumericalFailure;
      fail.x = problem.lower;
      fail.slack = problem.eval_min(fail.x);
      return fail;
    }

    for (int i = 0; i < kRows; ++i) bmat.col(i) = a.col(basis[static_cast<size_t>(i)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);

    Eigen::VectorXd rhs = b;
    for (int j = 0; j < nCols; ++j) {
      if (state[j] == ColState::Basic) continue;
      double val = nonbasic_value(j);
      if (val != 0.0) rhs -= a.col(j) * val;
    }
    xb = lu.solve(rhs);

    Eigen::VectorXd cb = Eigen::VectorXd::Zero(kRows);
    for (int i = 0; i < kRows; ++i)
      if (basis[static_cast<size_t>(i)] == tCol) cb[i] = 1.0;
    Eigen::VectorXd y = lu.transpose().solve(cb);

    // Pricing.
    int enter = -1;
    double best_score = kOptTol;
    for (int j = 0; j < nCols; ++j) {
      if (state[j] == ColState::Basic) continue;
      double d = (j == tCol ? 1.0 : 0.0) - y.dot(a.col(j));
      bool eligible = (state[j] == ColState::AtLower && d > kOptTol) ||
                      (state[j] == ColState::AtUpper && d < -kOptTol);
      if (!eligible) continue;
      if (bland) {
        enter = j;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        enter = j;
      }
    }
    if (enter < 0) break;  // optimal

    const double dir = state[enter] == ColState::AtLower ? 1.0 : -1.0;
    Eigen::VectorXd w = lu.solve(a.col(enter));

    double step = std::isfinite(ub[enter]) && std::isfinite(lb[enter])
                      ? ub[enter] - lb[enter]
                      : kInf;
    int blocker = -1;  // -1 means the entering column flips bound
    double blocker_piv = 0.0;
    for (int i = 0; i < kRows; ++i) {
      int col = basis[static_cast<size_t>(i)];
      if (col == tCol) continue;  // free variable never blocks
      double denom = dir * w[i];
      double cand;
      if (denom > kPivTol) {
        if (!std::isfinite(lb[col])) continue;
        cand = (xb[i] - lb[col]) / denom;
      } else if (denom < -kPivTol) {
        if (!std::isfinite(ub[col])) continue;
        cand = (xb[i] - ub[col]) / denom;
      } else {
        continue;
      }
      cand = std::max(cand, 0.0);
      bool take = cand < step - 1e-12;
      if (!take && cand < step + 1e-12 && blocker >= 0) {
        // Tie: Bland picks the lowest column index, otherwise the largest pivot.
        take = bland ? col < basis[static_cast<size_t>(blocker)]
                     : std::abs(w[i]) > blocker_piv;
      }
      if (take) {
        step = cand;
        blocker = i;
        blocker_piv = std::abs(w[i]);
      }
    }

    if (!std::isfinite(step)) {
      LpSolution fail;
      fail.status = LpStatus::NumericalFailure;
      fail.x = problem.lower;
      fail.slack = problem.eval_min(fail.x);
      return fail;
    }

    if (step <= kDegenTol) {
      if (++degenerate_run > kRows + 20) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    if (blocker < 0) {
      state[enter] = state[enter] == ColState::AtLower ? ColState::AtUpper
                                                       : ColState::AtLower;
    } else {
      int leave = basis[static_cast<size_t>(blocker)];
      state[leave] = dir * w[blocker] > 0.0 ? ColState::AtLower : ColState::AtUpper;
      basis[static_cast<size_t>(blocker)] = enter;
      state[enter] = ColState::Basic;
    }
  }

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.x.resize(nVars);
  for (int j = 0; j < nVars; ++j)
    sol.x[j] = state[j] == ColState::Basic ? 0.0 : nonbasic_value(j);
  double t_value = 0.0;
  for (int i = 0; i < kRows; ++i) {
    int col = basis[static_cast<size_t>(i)];
    if (col < nVars) sol.x[col] = xb[i];
    if (col == tCol) t_value = xb[i];
  }
  for (int j = 0; j < nVars; ++j)
    sol.x[j] = std::min(std::max(sol.x[j], problem.lower[j]), problem.upper[j]);
  sol.slack = t_value / common;  // undo the common problem scaling
  return sol;
}

}  // namespace lcris
