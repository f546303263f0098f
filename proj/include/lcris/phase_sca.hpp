#pragma once

#include <stdexcept>
#include <vector>

#include "lcris/common.hpp"
#include "lcris/lp.hpp"
#include "lcris/sinr.hpp"

namespace lcris {

/// Per-user signal/interference decomposition around a phase operating point:
///   s(k,j) = sum_n conj(v_n) a[k](n,j) + u(k,j),   a[k] = H_k W,
///   u(k,j) = h_d,k^H w_j,
/// so s(k,k) is user k's desired term and s(k,j), j != k, the interference
/// terms. Uses the project-wide conjugation convention of sinr.hpp.
struct StermState {
  std::vector<Eigen::MatrixXcd> a;  // per user: N x K
  Eigen::MatrixXcd u;               // K x K
  Eigen::MatrixXcd s;               // K x K
  Eigen::VectorXcd v;               // N
  Eigen::VectorXd theta;            // N
  double ceiling = kTwoPi;

  int users() const { return static_cast<int>(u.rows()); }
  int elements() const { return static_cast<int>(v.size()); }
};

struct ScaOptions {
  double trust_radius_init = 0.3;   // rad
  double trust_radius_min = 1e-4;   // rad
  double shrink_factor = 0.5;
  int max_iters = 100;
  double improve_tol = 1e-6;        // relative min-SINR improvement to accept

  void validate() const {
    if (!(trust_radius_min > 0.0) || !(trust_radius_init > trust_radius_min))
      throw std::invalid_argument("ScaOptions: need 0 < trust_radius_min < trust_radius_init");
    if (!(shrink_factor > 0.0) || !(shrink_factor < 1.0))
      throw std::invalid_argument("ScaOptions: shrink_factor must be in (0, 1)");
    if (max_iters < 0) throw std::invalid_argument("ScaOptions: max_iters must be >= 0");
  }
};

inline StermState build_sterms(const ChannelSet& ch, const Precoder& w,
                               const PhaseVector& phases) {
  if (w.antennas() != ch.m() || w.users() != ch.k() || phases.n() != ch.n())
    throw std::invalid_argument("build_sterms: dimension mismatch");
  StermState st;
  st.theta = phases.theta;
  st.ceiling = phases.ceiling;
  st.v = reflection_vector(phases);

  const int k_users = ch.k();
  Eigen::MatrixXcd gw = ch.G * w.w;  // N x K, shared across users
  st.a.resize(k_users);
  st.u.resize(k_users, k_users);
  st.s.resize(k_users, k_users);
  for (int k = 0; k < k_users; ++k) {
    st.a[k] = ch.h[k].conjugate().asDiagonal() * gw;  // H_k W
    st.u.row(k) = ch.h_d[k].adjoint() * w.w;
    st.s.row(k) = st.v.adjoint() * st.a[k] + st.u.row(k);
  }
  return st;
}

/// SINR evaluated from the s-terms; matches sinr_per_user on the same inputs.
inline SinrReport sinr_from_sterms(const StermState& st, const Eigen::VectorXd& noise) {
  const int k_users = st.users();
  SinrReport rep;
  rep.per_user.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    double interference = 0.0;
    for (int j = 0; j < k_users; ++j)
      if (j != k) interference += std::norm(st.s(k, j));
    rep.per_user[k] = std::norm(st.s(k, k)) / (interference + noise[k]);
  }
  rep.min_linear = rep.per_user.minCoeff();
  rep.min_db = linear_to_db(rep.min_linear);
  return rep;
}

struct LinearizedRows {
  Eigen::VectorXd alpha;  // K
  Eigen::MatrixXd beta;   // K x N
};

/// First-order rows of g_k(theta) = |s_k|^2 - kappa (sum_{j!=k} |s_kj|^2 + noise_k)
/// around the state's operating point:
///   alpha_k    = g_k(theta0)
///   beta_k[n]  = d g_k / d theta_n
///              = 2 Im{conj(s_kk) conj(v_n) a[k](n,k)}
///                - 2 kappa sum_{j!=k} Im{conj(s_kj) conj(v_n) a[k](n,j)}.
/// The sign follows from d/dtheta_n conj(v_n) = -i conj(v_n) under the fixed
/// conjugation convention and is certified against finite differences in the
/// test suite.
inline LinearizedRows linearize_constraint(const StermState& st, double kappa,
                                           const Eigen::VectorXd& noise) {
  if (kappa < 0.0) throw std::invalid_argument("linearize_constraint: kappa must be >= 0");
  if (noise.size() != st.users())
    throw std::invalid_argument("linearize_constraint: noise dimension mismatch");
  const int k_users = st.users();
  const int n_elems = st.elements();

  LinearizedRows rows;
  rows.alpha.resize(k_users);
  rows.beta.resize(k_users, n_elems);
  for (int k = 0; k < k_users; ++k) {
    double interference = 0.0;
    for (int j = 0; j < k_users; ++j)
      if (j != k) interference += std::norm(st.s(k, j));
    rows.alpha[k] = std::norm(st.s(k, k)) - kappa * (interference + noise[k]);

    for (int n = 0; n < n_elems; ++n) {
      const cplx vc = std::conj(st.v[n]);
      double grad = 2.0 * std::imag(std::conj(st.s(k, k)) * vc * st.a[k](n, k));
      for (int j = 0; j < k_users; ++j) {
        if (j == k) continue;
        grad -= 2.0 * kappa * std::imag(std::conj(st.s(k, j)) * vc * st.a[k](n, j));
      }
      rows.beta(k, n) = grad;
    }
  }
  return rows;
}

/// Successive convex approximation on the phases for a fixed precoder.
/// Each iteration linearizes the SINR surplus at kappa = current min-SINR,
/// solves the max-min LP over a trust-region box intersected with the phase
/// bounds, and accepts the step only if the true min-SINR improves; otherwise
/// the trust region shrinks. Accepted iterates are strictly ascending, and
/// every iterate stays inside [0, ceiling] by LP construction.
inline PhaseVector optimize_phases(const ChannelSet& ch, const Precoder& w,
                                   const PhaseVector& theta0, const ScaOptions& opts,
                                   const Eigen::VectorXd& noise) {
  opts.validate();
  PhaseVector theta = theta0;
  double current = sinr_per_user(ch, w, theta, noise).min_linear;
  double radius = opts.trust_radius_init;
  const int n_elems = theta.n();

  for (int iter = 0; iter < opts.max_iters && radius >= opts.trust_radius_min; ++iter) {
    StermState st = build_sterms(ch, w, theta);
    double kappa = sinr_from_sterms(st, noise).min_linear;
    LinearizedRows rows = linearize_constraint(st, kappa, noise);

    MaxMinLp lp;
    lp.alpha = rows.alpha;
    lp.beta = rows.beta;
    lp.lower.resize(n_elems);
    lp.upper.resize(n_elems);
    for (int n = 0; n < n_elems; ++n) {
      lp.lower[n] = std::max(-theta.theta[n], -radius);
      lp.upper[n] = std::min(theta.ceiling - theta.theta[n], radius);
    }

    LpSolution sol = solve_maxmin_lp(lp);
    if (sol.status != LpStatus::Optimal) {
      radius *= opts.shrink_factor;
      if (radius < opts.trust_radius_min) break;
      for (int n = 0; n < n_elems; ++n) {
        lp.lower[n] = std::max(-theta.theta[n], -radius);
        lp.upper[n] = std::min(theta.ceiling - theta.theta[n], radius);
      }
      sol = solve_maxmin_lp(lp);
      if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("optimize_phases: LP solve failed twice");
    }

    Eigen::VectorXd stepped = theta.theta + sol.x;
    for (int n = 0; n < n_elems; ++n)
      stepped[n] = std::min(std::max(stepped[n], 0.0), theta.ceiling);
    PhaseVector candidate(stepped, theta.ceiling);
    double value = sinr_per_user(ch, w, candidate, noise).min_linear;

    bool accept = current > 0.0 ? value - current >= opts.improve_tol * current
                                : value > current;
    if (accept) {
      theta = candidate;
      current = value;
    } else {
      radius *= opts.shrink_factor;
    }
  }
  return theta;
}

}  // namespace lcris
