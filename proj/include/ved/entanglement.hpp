#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ved/kernels.hpp"

namespace ved {

/// Partially transposed detector state in the basis {dd, du, ud, uu}.
/// Block diagonal in {(1,4),(2,3)}; trace = 1 + |<0|X>|^2 at this order.
struct PTMatrix {
  std::array<std::array<std::complex<double>, 4>, 4> m{};

  std::complex<double> operator()(int r, int c) const {
    return m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
};

struct EntanglementReport {
  bool peres_violated = false;
  double negativity = 0.0;
  double negativity_err = 0.0;
  double min_eigenvalue = 0.0;
  double margin = 0.0;  // |<0|X>|^2 - ||E_A||^2 ||E_B||^2
  double margin_err = 0.0;
};

/// Entry placement:
///   [ 1-|EA|^2-|EB|^2      .        .      <EA|EB> ]
///   [       .           |EB|^2   -<0|X>      .     ]
///   [       .           -<X|0>   |EA|^2      .     ]
///   [    <EB|EA>            .        .     |X|^2   ]
/// The (4,4) entry uses the vacuum-projection lower bound |<0|X>|^2 for the
/// fourth-order norm; it sits on the diagonal, so understating it can only
/// make the entanglement verdict more conservative.
inline PTMatrix assemble_pt(const AmplitudeSet& a) {
  if (!(std::isfinite(a.eA2) && std::isfinite(a.eB2) && std::isfinite(std::abs(a.x_ab)) &&
        std::isfinite(std::abs(a.e_ab))))
    throw std::invalid_argument("assemble_pt: non-finite amplitudes");
  if (a.eA2 < 0.0 || a.eB2 < 0.0) throw std::invalid_argument("assemble_pt: negative emission norm");
  if (a.eA2 + a.eB2 >= 1.0)
    throw std::invalid_argument("assemble_pt: eA2 + eB2 >= 1 breaks the perturbative regime");
  PTMatrix p;
  const double x2 = std::norm(a.x_ab);
  p.m[0][0] = 1.0 - a.eA2 - a.eB2;
  p.m[0][3] = a.e_ab;
  p.m[3][0] = std::conj(a.e_ab);
  p.m[1][1] = a.eB2;
  p.m[1][2] = -a.x_ab;
  p.m[2][1] = -std::conj(a.x_ab);
  p.m[2][2] = a.eA2;
  p.m[3][3] = x2;
  return p;
}

namespace detail {

struct Block2Eigs {
  double lo, hi;
};

inline Block2Eigs eig2(double d1, double d2, std::complex<double> off) {
  const double s = 0.5 * (d1 + d2);
  const double disc = std::sqrt(0.25 * (d1 - d2) * (d1 - d2) + std::norm(off));
  return {s - disc, s + disc};
}

}  // namespace detail

/// Peres test from the closed-form eigenvalues of the two 2x2 blocks.
inline EntanglementReport peres_test(const PTMatrix& p, const AmplitudeSet* a = nullptr) {
  const double eB2 = p.m[1][1].real();
  const double eA2 = p.m[2][2].real();
  const auto inner = detail::eig2(eB2, eA2, p.m[1][2]);
  const auto outer = detail::eig2(p.m[0][0].real(), p.m[3][3].real(), p.m[0][3]);

  EntanglementReport r;
  r.min_eigenvalue = std::min(inner.lo, outer.lo);
  r.negativity = (inner.lo < 0.0 ? -inner.lo : 0.0) + (outer.lo < 0.0 ? -outer.lo : 0.0);
  const double ax = std::abs(p.m[1][2]);
  r.margin = ax * ax - eA2 * eB2;
  if (a != nullptr) {
    const double axx = std::abs(a->x_ab);
    r.margin_err = 2.0 * axx * a->x_ab_err + a->eA2 * a->eB2_err + a->eB2 * a->eA2_err;
    // lambda_- = S/2 - D/2: linear propagation through the closed form
    const double D = std::sqrt((eA2 - eB2) * (eA2 - eB2) + 4.0 * axx * axx);
    const double dA = std::abs(0.5 - (eA2 - eB2) / (2.0 * (D > 0 ? D : 1.0)));
    const double dB = std::abs(0.5 + (eA2 - eB2) / (2.0 * (D > 0 ? D : 1.0)));
    const double dX = (D > 0) ? 2.0 * axx / D : 1.0;
    r.negativity_err = dA * a->eA2_err + dB * a->eB2_err + dX * a->x_ab_err;
  }
  r.peres_violated = r.negativity > r.negativity_err;
  return r;
}

/// O(eps^2) negativity from the inner block alone:
///   max(0, (sqrt((eA2-eB2)^2 + 4|x|^2) - (eA2+eB2)) / 2),
/// evaluated in the cancellation-free equivalent form 2*margin/(D + S).
inline double leading_order_negativity(const AmplitudeSet& a) {
  const double ax = std::abs(a.x_ab);
  const double margin = ax * ax - a.eA2 * a.eB2;
  if (!(margin > 0.0)) return 0.0;
  const double D =
      std::sqrt((a.eA2 - a.eB2) * (a.eA2 - a.eB2) + 4.0 * ax * ax);
  const double S = a.eA2 + a.eB2;
  if (D + S <= 0.0) return 0.0;
  return 2.0 * margin / (D + S);
}

inline EntanglementReport peres_test(const AmplitudeSet& a) {
  return peres_test(assemble_pt(a), &a);
}

}  // namespace ved
