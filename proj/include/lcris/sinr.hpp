#pragma once

#include <stdexcept>
#include <vector>

#include "lcris/channel.hpp"
#include "lcris/common.hpp"

namespace lcris {

/// Per-element reflection phases together with the active ceiling.
/// Invariant: 0 <= theta[n] <= ceiling <= 2pi.
struct PhaseVector {
  Eigen::VectorXd theta;
  double ceiling = kTwoPi;

  PhaseVector(Eigen::VectorXd angles, double theta_ceiling)
      : theta(std::move(angles)), ceiling(theta_ceiling) {
    if (!(ceiling > 0.0) || ceiling > kTwoPi * (1.0 + 1e-12))
      throw std::invalid_argument("PhaseVector: ceiling must lie in (0, 2pi]");
    ceiling = std::min(ceiling, kTwoPi);
    for (int n = 0; n < theta.size(); ++n) {
      if (theta[n] < -1e-12 || theta[n] > ceiling + 1e-12)
        throw std::invalid_argument("PhaseVector: phase outside [0, ceiling]");
      theta[n] = std::min(std::max(theta[n], 0.0), ceiling);
    }
  }

  int n() const { return static_cast<int>(theta.size()); }
};

/// Transmit matrix with one column per user under a sum-power budget.
struct Precoder {
  Eigen::MatrixXcd w;   // M x K
  double power_budget;  // W

  Precoder(Eigen::MatrixXcd beams, double budget)
      : w(std::move(beams)), power_budget(budget) {
    if (!(power_budget >= 0.0))
      throw std::invalid_argument("Precoder: power budget must be >= 0");
    if (total_power() > power_budget * (1.0 + 1e-9))
      throw std::invalid_argument("Precoder: sum power exceeds the budget");
  }

  int antennas() const { return static_cast<int>(w.rows()); }
  int users() const { return static_cast<int>(w.cols()); }
  double total_power() const { return w.squaredNorm(); }
};

struct SinrReport {
  Eigen::VectorXd per_user;  // linear
  double min_linear = 0.0;
  double min_db = 0.0;
};

// Phase-application convention, fixed project-wide:
//   stored   v[n] = exp(+i theta_n)
//   applied  f_k^H = v^H H_k + h_d,k^H   with   H_k = diag(h_k^H) G,
// so each RIS element contributes exp(-i theta_n) inside v^H H_k. The
// equivalent reflection-matrix form is h_k^H Theta G with
// Theta = diag(conj(v)). Everything downstream (s-terms, SCA gradients)
// uses this same orientation.

/// v[n] = exp(i theta_n).
inline Eigen::VectorXcd reflection_vector(const PhaseVector& phases) {
  Eigen::VectorXcd v(phases.n());
  for (int n = 0; n < phases.n(); ++n) v[n] = std::polar(1.0, phases.theta[n]);
  return v;
}

/// H_k = diag(h_k^H) G; row n is conj(h_k[n]) * G.row(n).
inline Eigen::MatrixXcd effective_channel(const ChannelSet& ch, int k) {
  if (k < 0 || k >= ch.k()) throw std::out_of_range("effective_channel: user index");
  return ch.h[k].conjugate().asDiagonal() * ch.G;
}

/// Composite per-user downlink channels f_k = H_k^H v + h_d,k, i.e.
/// f_k^H = v^H H_k + h_d,k^H.
struct EffectiveChannels {
  std::vector<Eigen::VectorXcd> f;  // K vectors of length M

  int users() const { return static_cast<int>(f.size()); }
};

inline EffectiveChannels effective_user_channels(const ChannelSet& ch,
                                                 const PhaseVector& phases) {
  if (phases.n() != ch.n())
    throw std::invalid_argument("effective_user_channels: phase count != RIS elements");
  Eigen::VectorXcd v = reflection_vector(phases);
  EffectiveChannels out;
  out.f.resize(ch.k());
  for (int k = 0; k < ch.k(); ++k) {
    // H_k^H v = G^H (v .* h_k)
    out.f[k] = ch.G.adjoint() * v.cwiseProduct(ch.h[k]) + ch.h_d[k];
  }
  return out;
}

inline SinrReport sinr_from_channels(const std::vector<Eigen::VectorXcd>& f,
                                     const Eigen::MatrixXcd& w,
                                     const Eigen::VectorXd& noise) {
  const int k_users = static_cast<int>(f.size());
  if (w.cols() != k_users || noise.size() != k_users)
    throw std::invalid_argument("sinr_from_channels: dimension mismatch");
  SinrReport rep;
  rep.per_user.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    if (!(noise[k] > 0.0))
      throw std::invalid_argument("sinr_from_channels: noise variance must be > 0");
    if (f[k].size() != w.rows())
      throw std::invalid_argument("sinr_from_channels: dimension mismatch");
    double signal = 0.0, interference = 0.0;
    for (int j = 0; j < k_users; ++j) {
      double p = std::norm(cplx(f[k].adjoint() * w.col(j)));
      if (j == k)
        signal = p;
      else
        interference += p;
    }
    rep.per_user[k] = signal / (interference + noise[k]);
  }
  rep.min_linear = rep.per_user.minCoeff();
  rep.min_db = linear_to_db(rep.min_linear);
  return rep;
}

/// SINR_k = |f_k^H w_k|^2 / (sum_{j != k} |f_k^H w_j|^2 + noise_k).
inline SinrReport sinr_per_user(const ChannelSet& ch, const Precoder& w,
                                const PhaseVector& phases, const Eigen::VectorXd& noise) {
  if (w.antennas() != ch.m() || w.users() != ch.k())
    throw std::invalid_argument("sinr_per_user: precoder dimensions mismatch");
  EffectiveChannels f = effective_user_channels(ch, phases);
  return sinr_from_channels(f.f, w.w, noise);
}

inline SinrReport sinr_per_user(const ChannelSet& ch, const Precoder& w,
                                const PhaseVector& phases, double noise) {
  return sinr_per_user(ch, w, phases,
                       Eigen::VectorXd::Constant(ch.k(), noise));
}

}  // namespace lcris
