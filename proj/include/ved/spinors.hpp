#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ved {

using Vec3 = std::array<double, 3>;

inline double norm3(const Vec3& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}
inline double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Two-component helicity spinor, unit norm.
struct Spinor2 {
  std::complex<double> up, down;

  std::complex<double> dot(const Spinor2& o) const {  // this^dagger . o
    return std::conj(up) * o.up + std::conj(down) * o.down;
  }
  double norm() const { return std::sqrt(std::norm(up) + std::norm(down)); }
};

/// Positive-helicity spinor u_r(p) = (p_x - i p_y, p - p_z)/sqrt(2p(p-p_z)).
/// The p || +z direction is a removable singularity with limit (1, 0).
inline Spinor2 spinor_r(const Vec3& pv) {
  const double p = norm3(pv);
  if (!(p > 0.0)) throw std::invalid_argument("spinor_r: zero momentum");
  const double pmz = p - pv[2];
  if (pmz <= 1e-14 * p) return {1.0, 0.0};
  const double s = 1.0 / std::sqrt(2.0 * p * pmz);
  return {std::complex<double>(pv[0], -pv[1]) * s, std::complex<double>(pmz, 0.0) * s};
}

/// Negative helicity: u_l(p) = u_r(-p).
inline Spinor2 spinor_l(const Vec3& pv) { return spinor_r({-pv[0], -pv[1], -pv[2]}); }

}  // namespace ved
