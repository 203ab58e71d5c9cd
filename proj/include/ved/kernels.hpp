#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "ved/quadrature.hpp"
#include "ved/spinors.hpp"
#include "ved/windows.hpp"

namespace ved {

enum class FieldModel { DiracRight, DiracLeft, DiracBoth, KleinGordon, DiracScalarAblated };

inline int handedness_multiplier(FieldModel m) { return m == FieldModel::DiracBoth ? 2 : 1; }
inline bool is_dirac(FieldModel m) { return m != FieldModel::KleinGordon; }

inline std::string model_name(FieldModel m) {
  switch (m) {
    case FieldModel::DiracRight: return "dirac-right";
    case FieldModel::DiracLeft: return "dirac-left";
    case FieldModel::DiracBoth: return "dirac-both";
    case FieldModel::KleinGordon: return "klein-gordon";
    case FieldModel::DiracScalarAblated: return "dirac-scalar-ablated";
  }
  return "?";
}

struct DetectorSpec {
  double gap = 0.0;  // Omega >= 0
  Vec3 position{0.0, 0.0, 0.0};
  WindowProfile window;

  void validate() const {
    if (!(gap >= 0.0)) throw std::invalid_argument("detector: gap must be >= 0");
    window.validate();
  }
};

struct GeometrySpec {
  double separation = 1.0;  // L = |x_B - x_A|
  double duration = 1.0;    // T, common window duration scale
  bool causal = false;      // when set, enforce L >= 3T

  double probe_radius() const { return duration; }  // R = T

  void validate() const {
    if (!(separation > 0.0)) throw std::invalid_argument("geometry: separation must be > 0");
    if (!(duration > 0.0)) throw std::invalid_argument("geometry: duration must be > 0");
    if (causal && separation < 3.0 * duration)
      throw std::invalid_argument("geometry: causal flag requires L >= 3T");
  }
};

/// Second-order amplitudes of one detector-pair configuration.
struct AmplitudeSet {
  double eA2 = 0.0, eA2_err = 0.0;
  double eB2 = 0.0, eB2_err = 0.0;
  std::complex<double> x_ab{0.0, 0.0};
  double x_ab_err = 0.0;
  std::complex<double> e_ab{0.0, 0.0};
  double e_ab_err = 0.0;
  bool converged = true;
};

namespace kernel {

// spherical Bessel j0, j1 with stable small-argument series
inline double j0(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-2) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return std::sin(x) / x;
}

inline double j1(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-2) {
    const double x2 = x * x;
    return x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0));
  }
  return std::sin(x) / (x * x) - std::cos(x) / x;
}

/// Angular reduction of the Dirac pair kernel: Int dOm_p dOm_q of
/// (1/2)(1 + p.q/pq) e^{i(p+q).L} equals (4pi)^2/2 [j0(pL)j0(qL) - j1(pL)j1(qL)];
/// this returns the radial kernel with the p^2 q^2 measure attached.
inline double angular(double p, double q, double L) {
  if (!(p > 0.0 && q > 0.0 && L > 0.0))
    throw std::invalid_argument("angular_kernel: need p, q, L > 0");
  return p * p * q * q * (j0(p * L) * j0(q * L) - j1(p * L) * j1(q * L));
}

/// Scalar-square ablation keeps only the 1/2 spinor term: p^2 q^2 j0 j0.
inline double angular_ablated(double p, double q, double L) {
  if (!(p > 0.0 && q > 0.0 && L > 0.0))
    throw std::invalid_argument("angular_kernel: need p, q, L > 0");
  return p * p * q * q * j0(p * L) * j0(q * L);
}

// One-dimensional forms after integrating out v = p - q at fixed w = p + q
// (Jacobian 1/2, v in [-w, w]). Written as w^5 phi(wL); the trig expression
// cancels to O(z^4) at small z = wL, so a series branch is required there.
inline double omega_dirac(double w, double L) {
  const double z = w * L;
  const double w5 = w * w * w * w * w;
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    double phi = 1.0 / 30.0;
    double zp = z2;
    constexpr double c[6] = {-1.0 / 252.0,       1.0 / 6480.0,         -1.0 / 332640.0,
                             1.0 / 28304640.0,   -1.0 / 3592512000.0,  1.0 / 635156121600.0};
    for (double ck : c) {
      phi += ck * zp;
      zp *= z2;
    }
    return w5 * phi;
  }
  const double s = std::sin(z), c = std::cos(z);
  const double num = -z * z * z * c / 6.0 + z * z * s / 2.0 + z * c - s;
  return w5 * num / (z * z * z * z * z);
}

inline double omega_ablated(double w, double L) {
  const double z = w * L;
  const double w5 = w * w * w * w * w;
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    double phi = 1.0 / 30.0;
    double zp = z2;
    constexpr double c[6] = {-1.0 / 315.0,      1.0 / 9072.0,         -1.0 / 498960.0,
                             1.0 / 44478720.0,  -1.0 / 5837832000.0,  1.0 / 1058593536000.0};
    for (double ck : c) {
      phi += ck * zp;
      zp *= z2;
    }
    return w5 * phi;
  }
  const double s = std::sin(z), c = std::cos(z);
  const double num = s / 4.0 - z * c / 4.0 - z * z * z * c / 12.0;
  return w5 * num / (z * z * z * z * z);
}

inline double omega_kg(double w, double L) {
  const double z = w * L;
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return w * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0));
  }
  return w * std::sin(z) / z;
}

inline double reduced(FieldModel m, double w, double L) {
  switch (m) {
    case FieldModel::KleinGordon: return omega_kg(w, L);
    case FieldModel::DiracScalarAblated: return omega_ablated(w, L);
    default: return omega_dirac(w, L);
  }
}

inline double radial(FieldModel m, double p, double q, double L) {
  return m == FieldModel::DiracScalarAblated ? angular_ablated(p, q, L) : angular(p, q, L);
}

}  // namespace kernel

inline double angular_kernel(double p, double q, double L) { return kernel::angular(p, q, L); }

inline constexpr double dirac_prefactor = 1.0 / (8.0 * M_PI * M_PI * M_PI * M_PI);

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_scale = 1e-13;  // abs_tol = abs_scale * (coarse integrand magnitude)
  long max_evals = 4'000'000;
};

enum class EvalPath { Reduced1D, Radial2D };

namespace detail {

// crude magnitude probe used to turn relative floors into absolute ones
template <class F>
double probe_scale(F&& f, double lo, double hi) {
  double m = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double x = lo + (hi - lo) * i / 64.0;
    const double v = std::abs(f(x));
    if (std::isfinite(v)) m = std::max(m, v);
  }
  return m;
}

inline double tail_scale(const WindowProfile& w) {
  if (w.family == WindowFamily::Gaussian) return 1.0 / w.duration;
  return 1.0 / w.so.smoothing;
}

}  // namespace detail

/// ||E_i||^2. Dirac family: m/(8 pi^4) * (1/30) Int w^5 eps~(Omega+w)^2 dw;
/// Klein-Gordon: Int w eps~(Omega+w)^2 dw (overall constant absorbed on both
/// sides of the condition).
inline QuadratureResult<double> emission_norm2(const DetectorSpec& d, FieldModel model,
                                               const QuadratureOptions& opt = {},
                                               EvalPath path = EvalPath::Reduced1D) {
  d.validate();
  if (d.window.amplitude == 0.0) return {0.0, 0.0, 0, true, 0.0};
  const double Om = d.gap;
  const bool dirac = is_dirac(model);
  const double mult = handedness_multiplier(model);
  const double pref = dirac ? mult * dirac_prefactor / 30.0 : 1.0;
  const int pw = dirac ? 5 : 1;

  auto weight = [pw](double w) {
    double r = w;
    for (int i = 1; i < pw; ++i) r *= w;
    return r;
  };
  auto f = [&](double w) {
    const double e = eval_transform(d.window, Om + w);
    return weight(w) * e * e;
  };
  auto env = [&, d](double w) {
    const double b = envelope_bound(d.window, Om + w);
    return weight(w) * b * b;
  };

  const double probe_hi = Om + 12.0 * detail::tail_scale(d.window);
  const double scale = detail::probe_scale(f, 0.0, probe_hi);

  IntegrationSpec spec;
  spec.lower = 0.0;
  spec.upper = std::numeric_limits<double>::infinity();
  spec.rel_tol = opt.rel_tol;
  spec.abs_tol = std::max(opt.abs_scale * scale, 1e-300);
  spec.max_evals = opt.max_evals;
  spec.envelope = env;

  if (path == EvalPath::Reduced1D) {
    auto r = integrate_1d(f, spec);
    r.value *= pref;
    r.error_estimate *= pref;
    return r;
  }

  // 2D route. Dirac: the raw (p,q) radial integral with the exact v-reduction
  // undone; Klein-Gordon: radial x angle with the flat angular measure.
  if (dirac) {
    auto f2 = [&](double p, double q) {
      const double e = eval_transform(d.window, Om + p + q);
      return p * p * q * q * e * e;
    };
    const double cut = detail::envelope_cut(env, 0.0, spec.abs_tol);
    IntegrationSpec sx = spec;
    sx.upper = cut;
    sx.envelope = nullptr;
    sx.abs_tol = spec.abs_tol / std::max(cut, 1.0);
    IntegrationSpec sy = sx;
    auto r = integrate_2d(f2, sx, sy);
    r.truncation_point = cut;
    // 2/(2pi)^4 == 1/(8 pi^4)
    r.value *= mult * dirac_prefactor;
    r.error_estimate *= mult * dirac_prefactor;
    return r;
  }
  auto f2 = [&](double p, double mu) {
    (void)mu;
    const double e = eval_transform(d.window, Om + p);
    return 0.5 * p * e * e;
  };
  const double cut = detail::envelope_cut(env, 0.0, spec.abs_tol);
  IntegrationSpec sx = spec;
  sx.upper = cut;
  sx.envelope = nullptr;
  IntegrationSpec sy;
  sy.lower = -1.0;
  sy.upper = 1.0;
  sy.rel_tol = opt.rel_tol;
  sy.abs_tol = sx.abs_tol;
  auto r = integrate_2d(f2, sx, sy);
  r.truncation_point = cut;
  return r;
}

namespace detail {

template <class KernelF, class ProductF>
QuadratureResult<double> pair_integral_1d(KernelF&& ker, ProductF&& prod,
                                          const WindowProfile& wa, const WindowProfile& wb,
                                          double OmA, double OmB, double L,
                                          const QuadratureOptions& opt) {
  auto f = [&](double w) { return ker(w) * prod(w); };
  auto env = [&, wa, wb, OmA, OmB, L](double w) {
    // valid for every reduced kernel: series branch bounded by w^5/30,
    // trig branch term-by-term, plus w for the Klein-Gordon kernel
    const double w2 = w * w;
    const double k = w2 * w2 * w / 30.0 + w2 * w / (6 * L * L) + w2 / (2 * L * L * L) +
                     w / (L * L * L * L) + 1.0 / (L * L * L * L * L) + w;
    return k * envelope_bound(wa, OmA + w) * envelope_bound(wb, OmB - w);
  };
  const double probe_hi = std::max(OmA, OmB) + 12.0 * std::max(tail_scale(wa), tail_scale(wb));
  const double scale = probe_scale(f, 0.0, probe_hi);

  IntegrationSpec spec;
  spec.lower = 0.0;
  spec.upper = std::numeric_limits<double>::infinity();
  spec.rel_tol = opt.rel_tol;
  spec.abs_tol = std::max(opt.abs_scale * scale, 1e-300);
  spec.max_evals = opt.max_evals;
  spec.osc_scale = L;
  spec.envelope = env;
  return integrate_1d(f, spec);
}

template <class RadialF, class ProductF>
QuadratureResult<double> pair_integral_2d(RadialF&& ker, ProductF&& prod,
                                          const WindowProfile& wa, const WindowProfile& wb,
                                          double OmA, double OmB, double L,
                                          const QuadratureOptions& opt) {
  auto env = [&, wa, wb, OmA, OmB](double w) {
    const double k = std::pow(std::abs(w) + 1.0, 5);
    return k * envelope_bound(wa, OmA + w) * envelope_bound(wb, OmB - w);
  };
  const double scale0 = probe_scale(env, 0.0, std::max(OmA, OmB) + 4.0);
  const double cut = envelope_cut(env, 0.0, std::max(1e-300, opt.abs_scale * scale0));

  auto f2 = [&](double p, double q) { return ker(p, q) * prod(p + q); };
  const double scale = std::max(probe_scale([&](double p) { return f2(p, 0.37 * p + 0.1); }, 1e-6, cut),
                                probe_scale([&](double p) { return f2(p, 0.11); }, 1e-6, cut));

  IntegrationSpec sx;
  sx.lower = 0.0;
  sx.upper = cut;
  sx.rel_tol = opt.rel_tol;
  sx.abs_tol = std::max(opt.abs_scale * scale * std::max(cut, 1.0), 1e-300);
  sx.max_evals = opt.max_evals;
  sx.osc_scale = L;
  IntegrationSpec sy = sx;
  auto r = integrate_2d(f2, sx, sy);
  r.truncation_point = cut;
  return r;
}

}  // namespace detail

/// <0|X_AB>: virtual pair exchange between the detectors. Two evaluation
/// paths must agree within combined error estimates; the 1D path is the
/// closed-form v-reduction of the 2D radial kernel.
inline QuadratureResult<std::complex<double>> exchange_amplitude(
    const DetectorSpec& dA, const DetectorSpec& dB, const GeometrySpec& geom, FieldModel model,
    const QuadratureOptions& opt = {}, EvalPath path = EvalPath::Reduced1D) {
  dA.validate();
  dB.validate();
  geom.validate();
  const double L = geom.separation;
  if (dA.window.amplitude == 0.0 || dB.window.amplitude == 0.0)
    return {{0.0, 0.0}, 0.0, 0, true, 0.0};

  auto prod = [&](double w) {
    return eval_transform(dA.window, dA.gap + w) * eval_transform(dB.window, dB.gap - w);
  };

  QuadratureResult<double> r;
  double sign = 1.0;
  if (model == FieldModel::KleinGordon) {
    if (path == EvalPath::Reduced1D) {
      r = detail::pair_integral_1d([&](double w) { return kernel::omega_kg(w, L); }, prod,
                                   dA.window, dB.window, dA.gap, dB.gap, L, opt);
    } else {
      // radial x angle: (1/2) Int dp dmu p cos(p L mu) eps~ eps~
      auto env = [&](double w) {
        return (std::abs(w) + 1.0) * envelope_bound(dA.window, dA.gap + w) *
               envelope_bound(dB.window, dB.gap - w);
      };
      const double scale0 = detail::probe_scale(env, 0.0, std::max(dA.gap, dB.gap) + 4.0);
      const double cut = detail::envelope_cut(env, 0.0, std::max(1e-300, opt.abs_scale * scale0));
      auto f2 = [&](double p, double mu) { return 0.5 * p * std::cos(p * L * mu) * prod(p); };
      IntegrationSpec sx;
      sx.lower = 0.0;
      sx.upper = cut;
      sx.rel_tol = opt.rel_tol;
      sx.abs_tol = std::max(opt.abs_scale * detail::probe_scale(prod, 0.0, cut), 1e-300);
      sx.max_evals = opt.max_evals;
      sx.osc_scale = L;
      IntegrationSpec sy;
      sy.lower = -1.0;
      sy.upper = 1.0;
      sy.rel_tol = opt.rel_tol;
      sy.abs_tol = sx.abs_tol;
      sy.osc_scale = 0.0;
      auto rr = integrate_2d(f2, sx, sy);
      rr.truncation_point = cut;
      r = rr;
    }
  } else {
    const double mult = handedness_multiplier(model);
    sign = -mult * dirac_prefactor;  // leading minus of the pair contraction, recorded as computed
    if (path == EvalPath::Reduced1D) {
      r = detail::pair_integral_1d([&](double w) { return kernel::reduced(model, w, L); }, prod,
                                   dA.window, dB.window, dA.gap, dB.gap, L, opt);
    } else {
      r = detail::pair_integral_2d([&](double p, double q) { return kernel::radial(model, p, q, L); },
                                   prod, dA.window, dB.window, dA.gap, dB.gap, L, opt);
    }
  }
  QuadratureResult<std::complex<double>> out;
  out.value = sign * r.value;
  out.error_estimate = std::abs(sign) * r.error_estimate;
  out.evals = r.evals;
  out.converged = r.converged;
  out.truncation_point = r.truncation_point;
  return out;
}

/// <E_A|E_B>: same spatial kernel as the exchange but both transform
/// arguments up-shifted; reduces to ||E||^2 as L -> 0 for identical detectors.
inline QuadratureResult<std::complex<double>> cross_emission(
    const DetectorSpec& dA, const DetectorSpec& dB, const GeometrySpec& geom, FieldModel model,
    const QuadratureOptions& opt = {}, EvalPath path = EvalPath::Reduced1D) {
  dA.validate();
  dB.validate();
  geom.validate();
  const double L = geom.separation;
  if (dA.window.amplitude == 0.0 || dB.window.amplitude == 0.0)
    return {{0.0, 0.0}, 0.0, 0, true, 0.0};

  auto prod = [&](double w) {
    return eval_transform(dA.window, dA.gap + w) * eval_transform(dB.window, dB.gap + w);
  };
  QuadratureResult<double> r;
  double sign = 1.0;
  if (model == FieldModel::KleinGordon) {
    r = detail::pair_integral_1d([&](double w) { return kernel::omega_kg(w, L); }, prod, dA.window,
                                 dB.window, dA.gap, -dB.gap, L, opt);
  } else {
    sign = handedness_multiplier(model) * dirac_prefactor;
    if (path == EvalPath::Reduced1D) {
      r = detail::pair_integral_1d([&](double w) { return kernel::reduced(model, w, L); }, prod,
                                   dA.window, dB.window, dA.gap, -dB.gap, L, opt);
    } else {
      r = detail::pair_integral_2d([&](double p, double q) { return kernel::radial(model, p, q, L); },
                                   prod, dA.window, dB.window, dA.gap, -dB.gap, L, opt);
    }
  }
  QuadratureResult<std::complex<double>> out;
  out.value = sign * r.value;
  out.error_estimate = std::abs(sign) * r.error_estimate;
  out.evals = r.evals;
  out.converged = r.converged;
  out.truncation_point = r.truncation_point;
  return out;
}

/// All four second-order amplitudes for one configuration.
inline AmplitudeSet compute_amplitudes(const DetectorSpec& dA, const DetectorSpec& dB,
                                       const GeometrySpec& geom, FieldModel model,
                                       const QuadratureOptions& opt = {},
                                       EvalPath path = EvalPath::Reduced1D,
                                       bool with_cross = true) {
  AmplitudeSet a;
  auto ea = emission_norm2(dA, model, opt, path == EvalPath::Radial2D ? EvalPath::Radial2D
                                                                      : EvalPath::Reduced1D);
  auto eb = emission_norm2(dB, model, opt, path == EvalPath::Radial2D ? EvalPath::Radial2D
                                                                      : EvalPath::Reduced1D);
  auto x = exchange_amplitude(dA, dB, geom, model, opt, path);
  a.eA2 = ea.value;
  a.eA2_err = ea.error_estimate;
  a.eB2 = eb.value;
  a.eB2_err = eb.error_estimate;
  a.x_ab = x.value;
  a.x_ab_err = x.error_estimate;
  a.converged = ea.converged && eb.converged && x.converged;
  if (with_cross) {
    auto c = cross_emission(dA, dB, geom, model, opt, path);
    a.e_ab = c.value;
    a.e_ab_err = c.error_estimate;
    a.converged = a.converged && c.converged;
  }
  return a;
}

struct MarginResult {
  double margin = 0.0;
  double error = 0.0;
  AmplitudeSet amps;
  bool entangled() const { return margin > 0.0; }
};

/// Peres margin |<0|X_AB>|^2 - ||E_A||^2 ||E_B||^2; positive means entangled.
inline MarginResult condition_margin(const DetectorSpec& dA, const DetectorSpec& dB,
                                     const GeometrySpec& geom, FieldModel model,
                                     const QuadratureOptions& opt = {},
                                     bool with_cross = false) {
  MarginResult m;
  m.amps = compute_amplitudes(dA, dB, geom, model, opt, EvalPath::Reduced1D, with_cross);
  const double ax = std::abs(m.amps.x_ab);
  m.margin = ax * ax - m.amps.eA2 * m.amps.eB2;
  m.error = 2.0 * ax * m.amps.x_ab_err + m.amps.eA2 * m.amps.eB2_err + m.amps.eB2 * m.amps.eA2_err;
  return m;
}

}  // namespace ved
