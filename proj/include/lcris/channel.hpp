#pragma once

#include <stdexcept>
#include <vector>

#include "lcris/common.hpp"
#include "lcris/geometry.hpp"
#include "lcris/rng.hpp"

namespace lcris {

struct ChannelParams {
  double carrier_frequency;    // Hz
  double rician_bs_ris_db;     // K factor of the BS-RIS link
  double rician_ris_ue_db;     // K factor of the RIS-UE links
  double rician_bs_ue_db;      // K factor of the direct BS-UE links
  double pathloss_exponent;    // dimensionless
  double c0_db;                // pathloss at the reference distance, dB
  double d0;                   // reference distance, m
  double direct_extra_loss_db; // extra power loss on the direct link, dB >= 0

  void validate() const {
    if (!(carrier_frequency > 0.0))
      throw std::invalid_argument("ChannelParams: carrier_frequency must be > 0");
    if (!(d0 > 0.0)) throw std::invalid_argument("ChannelParams: d0 must be > 0");
    if (pathloss_exponent < 0.0)
      throw std::invalid_argument("ChannelParams: pathloss_exponent must be >= 0");
    if (direct_extra_loss_db < 0.0)
      throw std::invalid_argument("ChannelParams: direct_extra_loss_db must be >= 0");
    for (double k : {rician_bs_ris_db, rician_ris_ue_db, rician_bs_ue_db})
      if (!std::isfinite(k))
        throw std::invalid_argument("ChannelParams: Rician factors must be finite");
  }

  double wavelength() const { return kSpeedOfLight / carrier_frequency; }
};

/// Distance-dependent pathloss, linear power gain: 10^(c0_db/10) * (d0/d)^sigma.
inline double pathloss_linear(double d, const ChannelParams& p) {
  if (!(d > 0.0)) throw std::domain_error("pathloss_linear: distance must be > 0");
  return db_to_linear(p.c0_db) * std::pow(p.d0 / d, p.pathloss_exponent);
}

/// One realization of all links: G (RIS x BS), h[k] (RIS->UE_k, as a column
/// so that h^H is the physical downlink row), h_d[k] (BS->UE_k, same
/// convention), plus the drawn UE positions.
struct ChannelSet {
  Eigen::MatrixXcd G;                    // N x M
  std::vector<Eigen::VectorXcd> h;       // K vectors of length N
  std::vector<Eigen::VectorXcd> h_d;     // K vectors of length M
  std::vector<Eigen::Vector3d> ue_positions;

  int n() const { return static_cast<int>(G.rows()); }
  int m() const { return static_cast<int>(G.cols()); }
  int k() const { return static_cast<int>(h.size()); }
};

/// Rician mixture H = sqrt(gain) * (sqrt(K/(1+K)) a_rx a_tx^H + sqrt(1/(1+K)) H_nlos),
/// with the rank-1 line-of-sight term taken along the center-to-center
/// direction and i.i.d. unit-variance CN(0,1) scattering entries.
inline Eigen::MatrixXcd rician_channel(const ArrayGeometry& tx, const ArrayGeometry& rx,
                                       double wavelength, double rician_db, double gain,
                                       SplitMix64& rng) {
  if (!(gain > 0.0)) throw std::invalid_argument("rician_channel: gain must be > 0");
  Eigen::Vector3d delta = rx.center - tx.center;
  double dist = delta.norm();
  if (!(dist > 0.0))
    throw std::invalid_argument("rician_channel: tx and rx arrays are co-located");
  Eigen::Vector3d dir = delta / dist;

  Eigen::VectorXcd a_tx = steering_vector_dir(tx, dir, wavelength);
  Eigen::VectorXcd a_rx = steering_vector_dir(rx, -dir, wavelength);

  const double k_lin = db_to_linear(rician_db);
  const double los_w = std::sqrt(k_lin / (1.0 + k_lin));
  const double nlos_w = std::sqrt(1.0 / (1.0 + k_lin));

  Eigen::MatrixXcd hmat = los_w * (a_rx * a_tx.adjoint());
  for (int r = 0; r < hmat.rows(); ++r)
    for (int c = 0; c < hmat.cols(); ++c) hmat(r, c) += nlos_w * rng.cnormal();
  return std::sqrt(gain) * hmat;
}

/// Axis-aligned UE placement region; a zero-thickness box (fixed height) is fine.
struct UePlacementBox {
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;

  void validate() const {
    for (int i = 0; i < 3; ++i)
      if (lo[i] > hi[i])
        throw std::invalid_argument("UePlacementBox: empty placement region");
  }
};

struct ChannelScenario {
  ArrayGeometry bs;
  ArrayGeometry ris;
  UePlacementBox ue_region;
  int users = 0;

  void validate() const {
    if (users < 1) throw std::invalid_argument("ChannelScenario: users must be >= 1");
    ue_region.validate();
  }
};

/// Draws UE positions uniformly in the region and builds all links.
/// Each random component uses its own fork of `rng`, so e.g. the direct
/// channels do not depend on the RIS size and channels are identical across
/// schemes given the same stream.
inline ChannelSet generate_channel_set(const ChannelScenario& sc, const ChannelParams& p,
                                       const SplitMix64& rng) {
  sc.validate();
  p.validate();
  const double lam = p.wavelength();
  const int k_users = sc.users;

  ChannelSet out;
  out.ue_positions.resize(k_users);
  SplitMix64 pos_rng = rng.fork(0);
  for (int k = 0; k < k_users; ++k) {
    Eigen::Vector3d pos;
    for (int i = 0; i < 3; ++i) pos[i] = pos_rng.uniform(sc.ue_region.lo[i], sc.ue_region.hi[i]);
    out.ue_positions[k] = pos;
  }

  double d_bs_ris = (sc.ris.center - sc.bs.center).norm();
  SplitMix64 g_rng = rng.fork(1);
  out.G = rician_channel(sc.bs, sc.ris, lam, p.rician_bs_ris_db,
                         pathloss_linear(d_bs_ris, p), g_rng);

  out.h.resize(k_users);
  out.h_d.resize(k_users);
  const double direct_loss = db_to_linear(-p.direct_extra_loss_db);
  for (int k = 0; k < k_users; ++k) {
    ArrayGeometry ue = ArrayGeometry::ula_x(1, lam / 2.0, out.ue_positions[k]);

    double d_ris_ue = (ue.center - sc.ris.center).norm();
    SplitMix64 h_rng = rng.fork(2, static_cast<std::uint64_t>(k));
    Eigen::MatrixXcd row = rician_channel(sc.ris, ue, lam, p.rician_ris_ue_db,
                                          pathloss_linear(d_ris_ue, p), h_rng);
    out.h[k] = row.adjoint().col(0);

    double d_bs_ue = (ue.center - sc.bs.center).norm();
    SplitMix64 hd_rng = rng.fork(3, static_cast<std::uint64_t>(k));
    Eigen::MatrixXcd drow =
        rician_channel(sc.bs, ue, lam, p.rician_bs_ue_db,
                       pathloss_linear(d_bs_ue, p) * direct_loss, hd_rng);
    out.h_d[k] = drow.adjoint().col(0);
  }
  return out;
}

}  // namespace lcris
