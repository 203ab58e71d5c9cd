#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "ved/kernels.hpp"
#include "ved/quadrature.hpp"
#include "ved/spinors.hpp"
#include "ved/windows.hpp"

namespace ved {

// Reference-path evaluation of the emission and exchange integrals: the
// angular factor comes from direct numeric quadrature over the solid angles
// (L along z, azimuthal symmetry), never from the closed-form spherical
// Bessel reduction it is meant to check.

namespace oracle {

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(n - 1 - i)] =
        2.0 / ((1.0 - z * z) * pp * pp);
  }
}

/// Int dOm_p dOm_q (1/2)(1 + p.q/pq) e^{i(p+q).L z^}, real part, by a full
/// 3-angle tensor quadrature (theta_p, theta_q, relative azimuth; the fourth
/// angle is the free overall azimuth). Gauss-Legendre in the polar angles,
/// midpoint in the periodic azimuth. The spinor factor may be evaluated from
/// explicit helicity spinors instead of the dot-product shortcut.
inline double angular_direct(double p, double q, double L, bool explicit_spinors = false,
                             bool left_handed = false, int n_theta = 96, int n_phi = 32) {
  std::vector<double> gx, gw;
  gauss_legendre(n_theta, gx, gw);
  double sum = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double tp = 0.5 * M_PI * (gx[static_cast<std::size_t>(i)] + 1.0);
    const double wp = 0.5 * M_PI * gw[static_cast<std::size_t>(i)];
    for (int j = 0; j < n_theta; ++j) {
      const double tq = 0.5 * M_PI * (gx[static_cast<std::size_t>(j)] + 1.0);
      const double wq = 0.5 * M_PI * gw[static_cast<std::size_t>(j)];
      const double cph = std::cos(L * (p * std::cos(tp) + q * std::cos(tq)));
      double phi_sum = 0.0;
      for (int k = 0; k < n_phi; ++k) {
        const double phi = 2.0 * M_PI * (k + 0.5) / n_phi;
        double spin;
        if (explicit_spinors) {
          const Vec3 pv{p * std::sin(tp), 0.0, p * std::cos(tp)};
          const Vec3 qv{q * std::sin(tq) * std::cos(phi), q * std::sin(tq) * std::sin(phi),
                        q * std::cos(tq)};
          const Spinor2 up = left_handed ? spinor_l(pv) : spinor_r(pv);
          const Spinor2 uq = left_handed ? spinor_l(qv) : spinor_r(qv);
          spin = std::norm(up.dot(uq));
        } else {
          spin = 0.5 * (1.0 + std::cos(tp) * std::cos(tq) +
                        std::sin(tp) * std::sin(tq) * std::cos(phi));
        }
        phi_sum += spin;
      }
      sum += wp * wq * std::sin(tp) * std::sin(tq) * cph * phi_sum * (2.0 * M_PI / n_phi);
    }
  }
  return sum * 2.0 * M_PI;  // overall azimuth
}

/// Half-term variant (the 1/2 spinor piece alone), used by the ablation checks.
inline double angular_direct_half(double p, double q, double L, int n_theta = 96) {
  std::vector<double> gx, gw;
  gauss_legendre(n_theta, gx, gw);
  double sum = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double tp = 0.5 * M_PI * (gx[static_cast<std::size_t>(i)] + 1.0);
    const double wp = 0.5 * M_PI * gw[static_cast<std::size_t>(i)];
    for (int j = 0; j < n_theta; ++j) {
      const double tq = 0.5 * M_PI * (gx[static_cast<std::size_t>(j)] + 1.0);
      const double wq = 0.5 * M_PI * gw[static_cast<std::size_t>(j)];
      const double cph = std::cos(L * (p * std::cos(tp) + q * std::cos(tq)));
      sum += wp * wq * std::sin(tp) * std::sin(tq) * 0.5 * cph;
    }
  }
  return sum * (2.0 * M_PI) * (2.0 * M_PI);
}

// Separated angular factors for the radial scans (exact split of the
// 1/2 + p.q/2pq structure). Adaptive quadrature in mu keeps this path
// independent of the j0/j1 closed forms.
inline double mu_cos(double k, double L, const QuadratureOptions& opt) {
  IntegrationSpec s;
  s.lower = -1.0;
  s.upper = 1.0;
  s.rel_tol = opt.rel_tol;
  s.abs_tol = 1e-14;
  s.max_evals = 400000;
  s.osc_scale = std::max(k * L, 0.0);  // period of cos(k L mu) in mu is 2 pi/(k L)
  auto r = integrate_1d([&](double mu) { return std::cos(k * L * mu); }, s);
  return r.value;
}

inline double mu_musin(double k, double L, const QuadratureOptions& opt) {
  IntegrationSpec s;
  s.lower = -1.0;
  s.upper = 1.0;
  s.rel_tol = opt.rel_tol;
  s.abs_tol = 1e-14;
  s.max_evals = 400000;
  s.osc_scale = std::max(k * L, 0.0);
  auto r = integrate_1d([&](double mu) { return mu * std::sin(k * L * mu); }, s);
  return r.value;
}

}  // namespace oracle

/// ||E_i||^2 via the raw (p,q) radial integral with the numerically obtained
/// angular factor. Expensive; meant for small grids.
inline QuadratureResult<double> brute_force_emission(const DetectorSpec& d, FieldModel model,
                                                     const QuadratureOptions& opt = {},
                                                     bool left_handed = false) {
  d.validate();
  const double Om = d.gap;
  if (model == FieldModel::KleinGordon) return emission_norm2(d, model, opt, EvalPath::Radial2D);

  // angular factor is (p,q)-independent for the emission: measure it once
  const double ang = oracle::angular_direct(1.0, 1.0, 1e-9, true, left_handed, 64, 48);
  auto f2 = [&](double p, double q) {
    const double e = eval_transform(d.window, Om + p + q);
    return p * p * q * q * e * e;
  };
  auto env = [&](double w) {
    const double b = envelope_bound(d.window, Om + w);
    const double w5 = w * w * w * w * w;
    return (w5 / 30.0 + 1.0) * b * b;
  };
  const double scale = detail::probe_scale(
      [&](double w) {
        const double e = eval_transform(d.window, Om + w);
        return w * w * w * w * w * e * e;
      },
      0.0, Om + 12.0 * detail::tail_scale(d.window));
  const double cut = detail::envelope_cut(env, 0.0, std::max(opt.abs_scale * scale, 1e-300));

  IntegrationSpec sx;
  sx.lower = 0.0;
  sx.upper = cut;
  sx.rel_tol = opt.rel_tol;
  sx.abs_tol = std::max(opt.abs_scale * scale / std::max(cut, 1.0), 1e-300);
  sx.max_evals = opt.max_evals;
  IntegrationSpec sy = sx;
  auto r = integrate_2d(f2, sx, sy);
  const double mult = handedness_multiplier(model);
  const double c = mult * ang / std::pow(2.0 * M_PI, 6);
  r.value *= c;
  r.error_estimate *= std::abs(c);
  r.truncation_point = cut;
  return r;
}

/// <0|X_AB> via the raw (p,q) radial integral; the angular factor at each
/// radial node is assembled from adaptive mu-quadratures of the two solid
/// angles (the 1/2 and the p.q/2pq pieces separately).
inline QuadratureResult<std::complex<double>> brute_force_exchange(
    const DetectorSpec& dA, const DetectorSpec& dB, const GeometrySpec& geom, FieldModel model,
    const QuadratureOptions& opt = {}) {
  dA.validate();
  dB.validate();
  geom.validate();
  if (model == FieldModel::KleinGordon)
    return exchange_amplitude(dA, dB, geom, model, opt, EvalPath::Radial2D);
  const double L = geom.separation;

  auto prod = [&](double w) {
    return eval_transform(dA.window, dA.gap + w) * eval_transform(dB.window, dB.gap - w);
  };
  const bool half_only = (model == FieldModel::DiracScalarAblated);
  auto ang = [&](double p, double q) {
    const double f0p = oracle::mu_cos(p, L, opt);
    const double f0q = oracle::mu_cos(q, L, opt);
    double a = f0p * f0q;
    if (!half_only) {
      const double s1p = oracle::mu_musin(p, L, opt);
      const double s1q = oracle::mu_musin(q, L, opt);
      a -= s1p * s1q;
    }
    return 2.0 * M_PI * M_PI * a;  // (2 pi)^2 azimuth x 1/2 spinor normalisation
  };
  auto ker = [&](double p, double q) { return p * p * q * q * ang(p, q); };
  auto r = detail::pair_integral_2d(ker, prod, dA.window, dB.window, dA.gap, dB.gap, L, opt);
  const double mult = handedness_multiplier(model);
  const double c = -mult / std::pow(2.0 * M_PI, 6);
  QuadratureResult<std::complex<double>> out;
  out.value = c * r.value;
  out.error_estimate = std::abs(c) * r.error_estimate;
  out.evals = r.evals;
  out.converged = r.converged;
  out.truncation_point = r.truncation_point;
  return out;
}

}  // namespace ved
