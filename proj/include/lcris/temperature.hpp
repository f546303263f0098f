#pragma once

#include <optional>
#include <stdexcept>

#include "lcris/common.hpp"

namespace lcris {

/// Thermal model of one nematic liquid-crystal cell. The reference
/// temperature t_ref is where the cell covers the full [0, 2pi] phase range;
/// above t_clear the nematic phase (and all birefringence) is gone.
///
/// Only (t_ref, t_clear, alpha) are needed for the phase ceiling. The fitting
/// parameters A/B and the optical pair (wavelength, cell_gap) enable the
/// refractive-index and absolute-birefringence diagnostics.
struct LcCellModel {
  double t_ref;    // K
  double t_clear;  // K
  double alpha;    // molecular-order exponent, typically 0.20..0.25
  std::optional<double> fit_a;       // dimensionless
  std::optional<double> fit_b;       // 1/K
  std::optional<double> wavelength;  // m
  std::optional<double> cell_gap;    // m

  LcCellModel(double t_ref_k, double t_clear_k, double alpha_exp,
              bool allow_alpha_out_of_range = false)
      : t_ref(t_ref_k), t_clear(t_clear_k), alpha(alpha_exp) {
    if (!(t_ref > 0.0) || !(t_clear > t_ref))
      throw std::invalid_argument("LcCellModel: need 0 < t_ref < t_clear");
    if (!allow_alpha_out_of_range && (alpha < 0.20 || alpha > 0.25))
      throw std::invalid_argument(
          "LcCellModel: alpha outside [0.20, 0.25]; pass the override flag to allow");
    if (!(alpha > 0.0)) throw std::invalid_argument("LcCellModel: alpha must be positive");
  }

  /// Reference birefringence chosen so the cell spans 2pi at t_ref.
  /// Requires wavelength and cell_gap.
  std::optional<double> delta_n0() const {
    if (!wavelength || !cell_gap) return std::nullopt;
    if (*wavelength <= 0.0 || *cell_gap <= 0.0)
      throw std::invalid_argument("LcCellModel: wavelength and cell_gap must be positive");
    return (*wavelength / *cell_gap) * std::pow(1.0 - t_ref / t_clear, -alpha);
  }
};

namespace detail {
inline void check_nematic(const LcCellModel& m, double t) {
  if (t > m.t_clear)
    throw std::domain_error("temperature above clearing point: nematic phase lost");
}
}  // namespace detail

/// Birefringence dn(T) = dn0 * (1 - T/Tc)^alpha. Needs wavelength/cell_gap
/// so dn0 is defined.
inline double birefringence(const LcCellModel& m, double t_kelvin) {
  if (t_kelvin < 0.0) throw std::domain_error("birefringence: temperature below 0 K");
  detail::check_nematic(m, t_kelvin);
  auto dn0 = m.delta_n0();
  if (!dn0)
    throw std::invalid_argument("birefringence: wavelength and cell_gap required for delta_n0");
  return *dn0 * std::pow(1.0 - t_kelvin / m.t_clear, m.alpha);
}

/// Extraordinary / ordinary refractive indices from the four-parameter fit:
///   n_e = A - B T + (2 dn0 / 3)(1 - T/Tc)^alpha
///   n_o = A - B T - (dn0 / 3)(1 - T/Tc)^alpha
inline std::pair<double, double> refractive_indices(const LcCellModel& m, double t_kelvin) {
  detail::check_nematic(m, t_kelvin);
  if (!m.fit_a || !m.fit_b)
    throw std::invalid_argument("refractive_indices: fit parameters A and B not set");
  auto dn0 = m.delta_n0();
  if (!dn0)
    throw std::invalid_argument(
        "refractive_indices: wavelength and cell_gap required for delta_n0");
  double base = *m.fit_a - *m.fit_b * t_kelvin;
  double order = std::pow(1.0 - t_kelvin / m.t_clear, m.alpha);
  double n_e = base + (2.0 * *dn0 / 3.0) * order;
  double n_o = base - (*dn0 / 3.0) * order;
  return {n_e, n_o};
}

/// Maximum achievable phase shift at temperature T:
///   theta_max(T) = 2pi * ((Tc - T) / (Tc - Tr))^alpha.
/// Equals 2pi at T = Tr, 0 at T = Tc, and exceeds 2pi below Tr (cooler
/// conditions expand the range; optimizers clamp their ceiling to 2pi).
/// The optical constants cancel out, so no wavelength/cell_gap is needed.
inline double theta_max(const LcCellModel& m, double t_kelvin) {
  detail::check_nematic(m, t_kelvin);
  return kTwoPi * std::pow((m.t_clear - t_kelvin) / (m.t_clear - m.t_ref), m.alpha);
}

}  // namespace lcris
