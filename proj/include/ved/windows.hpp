#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ved {

enum class WindowFamily { Gaussian, SuperoscComb };

/// Knobs of the Aharonov-Berry comb construction
///   C(nu) = Re[(cos(nu*delta) + i a sin(nu*delta))^N],  delta = T/(2N),
/// smoothed in time by a Gaussian of width sigma. Inside the band the
/// transform locally oscillates at rate a*N*delta = a*T/2; off the band its
/// magnitude peaks at a^N, the usual superoscillation amplitude cost.
struct SuperoscParams {
  int order = 2;          // N, even, >= 2
  double speedup = 1.0;   // a >= 1
  double smoothing = 0.0; // sigma, 0 < sigma < delta/3

  double spacing(double duration) const { return duration / (2.0 * order); }
};

/// A temporally symmetric coupling window eps(t) with closed-form transform
/// eps~(nu) = Int dt eps(t) e^{i nu t}; real and even for every family.
struct WindowProfile {
  WindowFamily family = WindowFamily::Gaussian;
  double amplitude = 1.0;  // eps0 >= 0
  double duration = 1.0;   // T; Gaussian width scale, comb full support
  double modulation = 0.0; // nu0 >= 0, multiplies eps(t) by cos(nu0 t)
  SuperoscParams so;

  static WindowProfile gaussian(double eps0, double T, double nu0 = 0.0) {
    WindowProfile w;
    w.family = WindowFamily::Gaussian;
    w.amplitude = eps0;
    w.duration = T;
    w.modulation = nu0;
    w.validate();
    return w;
  }

  static WindowProfile superosc_comb(double eps0, double T, int N, double a, double sigma,
                                     double nu0 = 0.0) {
    WindowProfile w;
    w.family = WindowFamily::SuperoscComb;
    w.amplitude = eps0;
    w.duration = T;
    w.modulation = nu0;
    w.so.order = N;
    w.so.speedup = a;
    w.so.smoothing = sigma;
    w.validate();
    return w;
  }

  void validate() const {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("window: amplitude must be >= 0");
    if (!(duration > 0.0)) throw std::invalid_argument("window: duration must be > 0");
    if (!(modulation >= 0.0)) throw std::invalid_argument("window: modulation must be >= 0");
    if (family == WindowFamily::SuperoscComb) {
      if (so.order < 2 || so.order % 2 != 0)
        throw std::invalid_argument("superosc window: order N must be even and >= 2");
      if (!(so.speedup >= 1.0))
        throw std::invalid_argument("superosc window: speedup a must be >= 1");
      const double delta = so.spacing(duration);
      if (!(so.smoothing > 0.0 && so.smoothing < delta / 3.0))
        throw std::invalid_argument("superosc window: need 0 < sigma < delta/3");
    }
  }
};

namespace detail {

inline double comb_poly_re(double x, int N, double a) {
  const std::complex<double> z(std::cos(x), a * std::sin(x));
  return std::real(std::pow(z, N));
}

// binomial spike weights c_k = C(N,k) ((1+a)/2)^k ((1-a)/2)^(N-k),
// spikes at t_k = (2k - N) delta
inline std::vector<double> comb_weights(int N, double a) {
  std::vector<double> c(static_cast<std::size_t>(N) + 1);
  const double p = 0.5 * (1.0 + a);
  const double m = 0.5 * (1.0 - a);
  double binom = 1.0;
  for (int k = 0; k <= N; ++k) {
    c[static_cast<std::size_t>(k)] =
        binom * std::pow(p, k) * std::pow(m, N - k);
    binom *= static_cast<double>(N - k) / static_cast<double>(k + 1);
  }
  return c;
}

inline double unit_gauss(double t, double s) {
  return std::exp(-0.5 * t * t / (s * s)) / (s * std::sqrt(2.0 * M_PI));
}

}  // namespace detail

/// eps(t): coupling density at time t.
inline double eval_time(const WindowProfile& w, double t) {
  double base;
  if (w.family == WindowFamily::Gaussian) {
    const double T = w.duration;
    base = std::exp(-0.5 * t * t / (T * T));
  } else {
    const double delta = w.so.spacing(w.duration);
    const auto c = detail::comb_weights(w.so.order, w.so.speedup);
    double s = 0.0;
    for (int k = 0; k <= w.so.order; ++k) {
      const double tk = (2.0 * k - w.so.order) * delta;
      s += 0.5 * c[static_cast<std::size_t>(k)] *
           (detail::unit_gauss(t - tk, w.so.smoothing) + detail::unit_gauss(t + tk, w.so.smoothing));
    }
    base = s;
  }
  if (w.modulation > 0.0) base *= std::cos(w.modulation * t);
  return w.amplitude * base;
}

/// eps~(nu) = Int dt eps(t) e^{i nu t}, closed form per family; real and even.
inline double eval_transform(const WindowProfile& w, double nu) {
  auto core = [&w](double v) -> double {
    if (w.family == WindowFamily::Gaussian) {
      const double T = w.duration;
      return T * std::sqrt(2.0 * M_PI) * std::exp(-0.5 * v * v * T * T);
    }
    const double delta = w.so.spacing(w.duration);
    const double s = w.so.smoothing;
    return detail::comb_poly_re(v * delta, w.so.order, w.so.speedup) *
           std::exp(-0.5 * v * v * s * s);
  };
  double val;
  if (w.modulation > 0.0)
    val = 0.5 * (core(nu - w.modulation) + core(nu + w.modulation));
  else
    val = core(nu);
  return w.amplitude * val;
}

/// Monotone-decaying bound on |eps~| beyond the band, family-exact:
/// Gaussian windows are their own bound, the comb polynomial obeys
/// max|C| = max(1,a)^N <= (1+a^2)^(N/2).
inline double envelope_bound(const WindowProfile& w, double nu) {
  const double v = std::max(0.0, std::abs(nu) - w.modulation);
  if (w.family == WindowFamily::Gaussian) {
    const double T = w.duration;
    return w.amplitude * T * std::sqrt(2.0 * M_PI) * std::exp(-0.5 * v * v * T * T);
  }
  const double s = w.so.smoothing;
  const double peak = std::pow(1.0 + w.so.speedup * w.so.speedup, 0.5 * w.so.order);
  return w.amplitude * peak * std::exp(-0.5 * v * v * s * s);
}

struct SynthesisResult {
  WindowProfile window;
  double band_half_width = 0.0;   // largest |nu - band center| with crossings on target
  double target_spacing = 0.0;    // pi/L
  double amplitude_cost = 1.0;    // max off-band |eps~| / |eps~| at band center
};

/// Build a comb window whose transform locally oscillates as cos(nu L) near
/// the band center: a = 2L/T so that a*N*delta = L. The reported band is
/// measured from the actual zero crossings of the constructed transform.
inline SynthesisResult synthesize_superosc(double L, double T, int N, double sigma, double nu0,
                                           double eps0) {
  if (!(L > 0.0 && T > 0.0)) throw std::invalid_argument("synthesize_superosc: need L, T > 0");
  const double a = 2.0 * L / T;
  if (!(a >= 1.0))
    throw std::invalid_argument("synthesize_superosc: L < T/2 would need a < 1");
  SynthesisResult out;
  out.window = WindowProfile::superosc_comb(eps0, T, N, a, sigma, nu0);
  out.target_spacing = M_PI / L;

  // crossings of the unmodulated band profile S(u) = C(u delta) e^{-u^2 s^2/2}
  const double delta = out.window.so.spacing(T);
  auto S = [&](double u) {
    return detail::comb_poly_re(u * delta, N, a) * std::exp(-0.5 * u * u * sigma * sigma);
  };
  const double step = out.target_spacing / 64.0;
  const double u_max = M_PI / delta;  // one comb period
  std::vector<double> crossings;
  double prev = S(0.0);
  for (double u = step; u <= u_max; u += step) {
    const double cur = S(u);
    if ((prev < 0.0) != (cur < 0.0)) {
      double lo = u - step, hi = u;
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((S(lo) < 0.0) != (S(mid) < 0.0))
          hi = mid;
        else
          lo = mid;
      }
      crossings.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  double band = 0.0;
  for (std::size_t i = 1; i < crossings.size(); ++i) {
    const double spacing = crossings[i] - crossings[i - 1];
    if (std::abs(spacing - out.target_spacing) <= 0.1 * out.target_spacing)
      band = crossings[i];
    else
      break;
  }
  out.band_half_width = band;

  const double center = eval_transform(out.window, nu0);
  double off = 0.0;
  for (double u = band; u <= u_max; u += step)
    off = std::max(off, std::abs(eval_transform(out.window, nu0 + u)));
  out.amplitude_cost = (center != 0.0) ? off / std::abs(center) : std::numeric_limits<double>::infinity();
  return out;
}

inline std::string family_name(WindowFamily f) {
  return f == WindowFamily::Gaussian ? "gaussian" : "superosc-comb";
}

}  // namespace ved
