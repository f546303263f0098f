#pragma once

#include <stdexcept>
#include <vector>

#include "lcris/common.hpp"
#include "lcris/sinr.hpp"

namespace lcris {

struct PrecoderOptions {
  double sinr_tol = 1e-4;   // relative bisection tolerance on the SINR target
  int fp_max_iters = 500;   // virtual-uplink fixed-point iteration cap
  double fp_tol = 1e-10;    // fixed-point residual tolerance

  void validate() const {
    if (!(sinr_tol > 0.0) || !(fp_tol > 0.0) || fp_max_iters < 1)
      throw std::invalid_argument("PrecoderOptions: tolerances must be positive");
  }
};

/// Maximum ratio transmission with an equal power split. Users whose channel
/// is zero get a zero beam and their share goes to the remaining users.
inline Precoder mrt_precoder(const std::vector<Eigen::VectorXcd>& channels,
                             double total_power) {
  const int k_users = static_cast<int>(channels.size());
  if (k_users < 1) throw std::invalid_argument("mrt_precoder: no channels");
  const int m = static_cast<int>(channels[0].size());

  int nonzero = 0;
  for (const auto& c : channels) {
    if (static_cast<int>(c.size()) != m)
      throw std::invalid_argument("mrt_precoder: inconsistent channel lengths");
    if (c.norm() > 0.0) ++nonzero;
  }
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(m, k_users);
  if (nonzero > 0) {
    double per_user = total_power / nonzero;
    for (int k = 0; k < k_users; ++k) {
      double nrm = channels[k].norm();
      if (nrm > 0.0) w.col(k) = std::sqrt(per_user) / nrm * channels[k];
    }
  }
  return Precoder(w, total_power);
}

enum class FeasibilityStatus { Feasible, Infeasible, NumericalFailure };

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Infeasible;
  Eigen::MatrixXcd w;  // valid when Feasible
  int iterations = 0;
};

/// Can every user reach SINR >= gamma within the sum-power budget?
///
/// Virtual-uplink route: with noise-normalized channels ft_k = f_k / sigma_k,
/// iterate the uplink powers
///   q_k <- gamma / (ft_k^H (I + sum_{j != k} q_j ft_j ft_j^H)^{-1} ft_k)
/// from q = 0. The map is monotone, so the iterates increase toward the
/// minimal fixed point and the budget test sum(q) <= P certifies feasibility
/// (uplink and downlink need the same total power). On success the downlink
/// beams are the normalized uplink MMSE receivers and the downlink powers
/// solve the K x K SINR balance system, which makes every user sit exactly
/// at gamma.
inline FeasibilityResult feasibility_sinr(const std::vector<Eigen::VectorXcd>& f,
                                          const Eigen::VectorXd& noise, double gamma,
                                          double power, const PrecoderOptions& opts) {
  opts.validate();
  if (!(gamma > 0.0)) throw std::invalid_argument("feasibility_sinr: gamma must be > 0");
  const int k_users = static_cast<int>(f.size());
  if (noise.size() != k_users)
    throw std::invalid_argument("feasibility_sinr: noise dimension mismatch");
  const int m = static_cast<int>(f[0].size());

  std::vector<Eigen::VectorXcd> ft(f.size());
  for (int k = 0; k < k_users; ++k) {
    if (!(noise[k] > 0.0))
      throw std::invalid_argument("feasibility_sinr: noise variance must be > 0");
    ft[k] = f[k] / std::sqrt(noise[k]);
    if (ft[k].norm() == 0.0) return {FeasibilityStatus::Infeasible, {}, 0};
  }

  FeasibilityResult out;
  Eigen::VectorXd q = Eigen::VectorXd::Zero(k_users);
  Eigen::MatrixXcd phi(m, m);
  bool converged = false;
  for (int it = 0; it < opts.fp_max_iters; ++it) {
    out.iterations = it + 1;
    phi = Eigen::MatrixXcd::Identity(m, m);
    for (int j = 0; j < k_users; ++j) phi += q[j] * (ft[j] * ft[j].adjoint());
    Eigen::LLT<Eigen::MatrixXcd> llt(phi);

    double residual = 0.0;
    Eigen::VectorXd q_next(k_users);
    for (int k = 0; k < k_users; ++k) {
      Eigen::VectorXcd sol = llt.solve(ft[k]);
      double x = std::real(cplx(ft[k].adjoint() * sol));  // ft^H phi^-1 ft
      double excl = std::max(1.0 - q[k] * x, 1e-300);     // Sherman-Morrison leave-one-out
      q_next[k] = gamma * excl / x;
      residual = std::max(residual,
                          std::abs(q_next[k] - q[k]) / std::max(1.0, q_next[k]));
    }
    q = q_next;
    if (q.sum() > power * (1.0 + 1e-9)) {
      // Iterates increase monotonically toward the fixed point, so crossing
      // the budget already certifies infeasibility.
      out.status = FeasibilityStatus::Infeasible;
      return out;
    }
    if (residual < opts.fp_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    out.status = FeasibilityStatus::NumericalFailure;
    return out;
  }

  // Downlink mapping: MMSE directions + SINR balance powers.
  phi = Eigen::MatrixXcd::Identity(m, m);
  for (int j = 0; j < k_users; ++j) phi += q[j] * (ft[j] * ft[j].adjoint());
  Eigen::LLT<Eigen::MatrixXcd> llt(phi);
  std::vector<Eigen::VectorXcd> beams(f.size());
  for (int k = 0; k < k_users; ++k) {
    beams[k] = llt.solve(ft[k]);
    beams[k] /= beams[k].norm();
  }
  Eigen::MatrixXd gains(k_users, k_users);
  for (int k = 0; k < k_users; ++k)
    for (int j = 0; j < k_users; ++j)
      gains(k, j) = std::norm(cplx(ft[k].adjoint() * beams[j]));

  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(k_users, k_users);
  for (int k = 0; k < k_users; ++k) {
    sys(k, k) = gains(k, k) / gamma;
    for (int j = 0; j < k_users; ++j)
      if (j != k) sys(k, j) = -gains(k, j);
  }
  Eigen::VectorXd p = sys.partialPivLu().solve(Eigen::VectorXd::Ones(k_users));
  if (!p.allFinite() || p.minCoeff() < -1e-9 || p.sum() > power * (1.0 + 1e-9)) {
    out.status = FeasibilityStatus::Infeasible;
    return out;
  }

  out.w.resize(m, k_users);
  for (int k = 0; k < k_users; ++k)
    out.w.col(k) = std::sqrt(std::max(p[k], 0.0)) * beams[k];
  out.status = FeasibilityStatus::Feasible;
  return out;
}

struct PrecoderSolution {
  Precoder precoder;
  double gamma = 0.0;             // achieved balanced SINR level
  std::vector<int> zero_users;    // users with a vanishing channel, if any
};

namespace detail {
inline double min_sinr_of(const std::vector<Eigen::VectorXcd>& f,
                          const Eigen::MatrixXcd& w, const Eigen::VectorXd& noise) {
  return sinr_from_channels(f, w, noise).min_linear;
}
}  // namespace detail

/// Max-min SINR precoder under a sum-power budget: bisection on the common
/// target gamma using feasibility_sinr, warm-started at the MRT value so the
/// result can never fall below the MRT baseline. K = 1 reduces to MRT exactly.
/// Zero-channel users make the max-min value 0; they get zero beams and are
/// reported in zero_users while the remaining users get MRT-style beams.
inline PrecoderSolution maxmin_precoder(const std::vector<Eigen::VectorXcd>& f,
                                        const Eigen::VectorXd& noise, double power,
                                        const PrecoderOptions& opts = {}) {
  opts.validate();
  const int k_users = static_cast<int>(f.size());
  if (k_users < 1) throw std::invalid_argument("maxmin_precoder: no channels");
  if (noise.size() != k_users)
    throw std::invalid_argument("maxmin_precoder: noise dimension mismatch");

  std::vector<int> zero_users;
  for (int k = 0; k < k_users; ++k)
    if (f[k].norm() == 0.0) zero_users.push_back(k);
  if (!zero_users.empty() || k_users == 1) {
    PrecoderSolution sol{mrt_precoder(f, power), 0.0, zero_users};
    if (zero_users.empty())
      sol.gamma = power * f[0].squaredNorm() / noise[0];
    return sol;
  }

  double gamma_ub = 0.0;
  for (int k = 0; k < k_users; ++k)
    gamma_ub = std::max(gamma_ub, power * f[k].squaredNorm() / noise[k]);

  Precoder mrt = mrt_precoder(f, power);
  double v_mrt = detail::min_sinr_of(f, mrt.w, noise);

  double lo = 0.0;
  double hi = gamma_ub;
  Eigen::MatrixXcd best;
  if (v_mrt > 0.0) {
    auto r = feasibility_sinr(f, noise, v_mrt * (1.0 - 1e-9), power, opts);
    if (r.status == FeasibilityStatus::NumericalFailure)
      throw std::runtime_error("maxmin_precoder: uplink fixed point did not converge");
    if (r.status == FeasibilityStatus::Feasible) {
      lo = v_mrt * (1.0 - 1e-9);
      best = r.w;
    }
  }

  for (int it = 0; it < 200 && hi - lo > opts.sinr_tol * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    auto r = feasibility_sinr(f, noise, mid, power, opts);
    if (r.status == FeasibilityStatus::NumericalFailure)
      throw std::runtime_error("maxmin_precoder: uplink fixed point did not converge");
    if (r.status == FeasibilityStatus::Feasible) {
      lo = mid;
      best = r.w;
    } else {
      hi = mid;
    }
  }

  if (best.size() == 0) {
    // Bisection never found a feasible target; fall back to MRT.
    return PrecoderSolution{mrt, v_mrt, {}};
  }
  PrecoderSolution sol{Precoder(best, power), lo, {}};
  if (v_mrt > detail::min_sinr_of(f, best, noise))
    sol = PrecoderSolution{mrt, v_mrt, {}};
  return sol;
}

}  // namespace lcris
