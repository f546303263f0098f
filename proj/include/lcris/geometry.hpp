#pragma once

#include <stdexcept>

#include "lcris/common.hpp"

namespace lcris {

enum class ArrayKind { UlaX, UpaXZ };

/// Antenna array placement. Elements are indexed x-fastest for the planar
/// case (n = nx + Nx*nz) and offsets are measured from the array center.
struct ArrayGeometry {
  ArrayKind kind;
  int nx = 1;
  int nz = 1;
  double spacing = 0.0;  // m
  Eigen::Vector3d center = Eigen::Vector3d::Zero();

  static ArrayGeometry ula_x(int m, double spacing, const Eigen::Vector3d& center) {
    if (m < 1) throw std::invalid_argument("ArrayGeometry: element count must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("ArrayGeometry: spacing must be > 0");
    return ArrayGeometry{ArrayKind::UlaX, m, 1, spacing, center};
  }

  static ArrayGeometry upa_xz(int nx, int nz, double spacing, const Eigen::Vector3d& center) {
    if (nx < 1 || nz < 1)
      throw std::invalid_argument("ArrayGeometry: element counts must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("ArrayGeometry: spacing must be > 0");
    return ArrayGeometry{ArrayKind::UpaXZ, nx, nz, spacing, center};
  }

  int size() const { return kind == ArrayKind::UlaX ? nx : nx * nz; }

  Eigen::Vector3d element_offset(int n) const {
    if (n < 0 || n >= size()) throw std::out_of_range("ArrayGeometry: element index");
    if (kind == ArrayKind::UlaX) {
      double ox = (n - 0.5 * (nx - 1)) * spacing;
      return Eigen::Vector3d(ox, 0.0, 0.0);
    }
    int ix = n % nx;
    int iz = n / nx;
    double ox = (ix - 0.5 * (nx - 1)) * spacing;
    double oz = (iz - 0.5 * (nz - 1)) * spacing;
    return Eigen::Vector3d(ox, 0.0, oz);
  }
};

/// Far-field plane-wave steering vector for a unit propagation direction:
/// entry n is exp(i * (2pi/lambda) * dir . offset_n), unit modulus.
inline Eigen::VectorXcd steering_vector_dir(const ArrayGeometry& geom,
                                            const Eigen::Vector3d& unit_dir,
                                            double wavelength) {
  if (!(wavelength > 0.0))
    throw std::invalid_argument("steering_vector: wavelength must be > 0");
  const double k = kTwoPi / wavelength;
  Eigen::VectorXcd a(geom.size());
  for (int n = 0; n < geom.size(); ++n) {
    double phase = k * unit_dir.dot(geom.element_offset(n));
    a[n] = std::polar(1.0, phase);
  }
  return a;
}

/// Same, parameterized by azimuth/elevation:
/// dir = [cos(el)cos(az), cos(el)sin(az), sin(el)].
inline Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double azimuth,
                                        double elevation, double wavelength) {
  Eigen::Vector3d d(std::cos(elevation) * std::cos(azimuth),
                    std::cos(elevation) * std::sin(azimuth), std::sin(elevation));
  return steering_vector_dir(geom, d, wavelength);
}

}  // namespace lcris
