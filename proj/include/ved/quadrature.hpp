#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ved {

/// Integration domain and tolerances for one axis.
///
/// `upper` may be +infinity; semi-infinite domains are truncated where the
/// caller-supplied `envelope` (a monotone-decaying bound on the integrand
/// tail) falls below `abs_tol`, or mapped through x = a + t/(1-t) when no
/// envelope is given. When `osc_scale` is a positive length L, initial
/// panels are never wider than a quarter period (2*pi/L)/4, so cos(wL)-type
/// factors are resolved before adaptive refinement starts.
struct IntegrationSpec {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  double osc_scale = 0.0;
  long max_evals = 2'000'000;
  std::function<double(double)> envelope;  // optional tail bound, |f(x)| <= envelope(x)

  void validate() const {
    if (!(lower < upper)) throw std::invalid_argument("IntegrationSpec: lower must be < upper");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("IntegrationSpec: rel_tol must be > 0");
    if (max_evals <= 0) throw std::invalid_argument("IntegrationSpec: max_evals must be > 0");
  }
};

template <class T>
struct QuadratureResult {
  T value{};
  double error_estimate = 0.0;
  long evals = 0;
  bool converged = false;
  double truncation_point = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Gauss(7)/Kronrod(15) nodes on [0,1] and weights; odd indices are the
// embedded Gauss points.
inline constexpr double gk_x[15] = {
    0.0042723144395936940576063989283284, 0.025446043828620756865888097308925,
    0.067567788320115451661251881887438,  0.12923440720030276995800022632466,
    0.20695638226615442611944217787823,   0.29707742431130140792205907018797,
    0.3961075224960507457083735971537,    0.5,
    0.6038924775039492542916264028463,    0.7029225756886985365667896985542,
    0.79304361773384557388055782212177,   0.87076559279969723004199977367534,
    0.93243221167988454833874811811256,   0.97455395617137918762296067143325,
    0.99572768556040625043124236981384};
inline constexpr double gk_wk[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
inline constexpr double gk_wg[15] = {
    0.0, 0.129484966168869693270611432679082, 0.0,
    0.279705391489276667901467771423780, 0.0,
    0.381830050505118944950369775488975, 0.0,
    0.417959183673469387755102040816327, 0.0,
    0.381830050505118944950369775488975, 0.0,
    0.279705391489276667901467771423780, 0.0,
    0.129484966168869693270611432679082, 0.0};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

template <class T>
struct Panel {
  double a, b;
  T value{};
  double error = 0.0;
};

template <class T, class F>
Panel<T> eval_panel(F&& f, double a, double b, long& evals) {
  const double h = b - a;
  T k15{};
  T g7{};
  for (int i = 0; i < 15; ++i) {
    const T y = f(a + h * gk_x[i]);
    k15 += gk_wk[i] * y;
    g7 += gk_wg[i] * y;
  }
  evals += 15;
  Panel<T> p;
  p.a = a;
  p.b = b;
  // nodes live on [0,1], the weights on [-1,1]: scale by h/2
  p.value = 0.5 * h * k15;
  // QUADPACK-style error heuristic: (200 |K15-G7|)^1.5 capped by |K15-G7|.
  const double diff = magnitude(0.5 * h * (k15 - g7));
  double err = diff;
  if (diff > 0.0) err = std::min(diff, std::pow(200.0 * diff, 1.5));
  p.error = err;
  return p;
}

// Deterministic adaptive refinement: always split the worst panel, ties
// broken by left endpoint; final sum in left-to-right order (Kahan).
template <class T, class F>
QuadratureResult<T> adapt_finite(F&& f, double a, double b, const IntegrationSpec& spec) {
  std::vector<Panel<T>> panels;
  const double len = b - a;
  int n0 = 1;
  if (spec.osc_scale > 0.0) {
    const double cap = (2.0 * M_PI / spec.osc_scale) / 4.0;
    n0 = std::max(1, static_cast<int>(std::ceil(len / cap)));
    n0 = std::min(n0, 1 << 16);
  }
  QuadratureResult<T> res;
  for (int i = 0; i < n0; ++i) {
    const double pa = a + len * static_cast<double>(i) / n0;
    const double pb = (i + 1 == n0) ? b : a + len * static_cast<double>(i + 1) / n0;
    panels.push_back(eval_panel<T>(f, pa, pb, res.evals));
  }

  auto worst = [&]() {
    std::size_t w = 0;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      if (panels[i].error > panels[w].error ||
          (panels[i].error == panels[w].error && panels[i].a < panels[w].a))
        w = i;
    }
    return w;
  };

  for (;;) {
    T total{};
    double err = 0.0;
    for (const auto& p : panels) {
      total += p.value;
      err += p.error;
    }
    const double target = std::max(spec.abs_tol, spec.rel_tol * magnitude(total));
    if (err <= target && err == err) {
      res.converged = true;
      break;
    }
    if (res.evals + 30 > spec.max_evals) break;
    const std::size_t w = worst();
    const Panel<T> p = panels[w];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) break;  // interval exhausted at machine precision
    panels[w] = eval_panel<T>(f, p.a, mid, res.evals);
    panels.push_back(eval_panel<T>(f, mid, p.b, res.evals));
  }

  std::sort(panels.begin(), panels.end(),
            [](const Panel<T>& x, const Panel<T>& y) { return x.a < y.a; });
  T sum{};
  T comp{};
  double err = 0.0;
  for (const auto& p : panels) {
    const T y = p.value - comp;
    const T t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    err += p.error;
  }
  res.value = sum;
  res.error_estimate = err;
  return res;
}

// Smallest x >= lo with envelope(x) <= cut, found on a geometric grid plus
// bisection. Envelopes may rise before they decay; scan far enough first.
inline double envelope_cut(const std::function<double(double)>& env, double lo, double cut) {
  double x = std::max(lo, 1e-12);
  double step = std::max(1.0, std::abs(lo));
  double hi = x;
  double hi_val = env(hi);
  long guard = 0;
  while ((hi_val > cut || env(hi * 0.5 + x * 0.5) > cut) && guard < 400) {
    hi += step;
    step *= 1.5;
    hi_val = env(hi);
    ++guard;
  }
  double a = lo, b = hi;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if (env(m) <= cut && env(0.5 * (m + b)) <= cut)
      b = m;
    else
      a = m;
  }
  return b;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over spec's domain.
/// Non-convergence within max_evals is reported via converged=false, never
/// silently dropped.
template <class F>
auto integrate_1d(F&& f, const IntegrationSpec& spec)
    -> QuadratureResult<std::decay_t<decltype(f(0.0))>> {
  using T = std::decay_t<decltype(f(0.0))>;
  spec.validate();
  if (std::isinf(spec.upper)) {
    if (spec.envelope) {
      if (!(spec.abs_tol > 0.0))
        throw std::invalid_argument("integrate_1d: envelope truncation requires abs_tol > 0");
      const double cut = detail::envelope_cut(spec.envelope, spec.lower, spec.abs_tol);
      IntegrationSpec finite = spec;
      finite.upper = cut;
      auto r = detail::adapt_finite<T>(f, spec.lower, cut, finite);
      r.truncation_point = cut;
      return r;
    }
    // map [lower, inf) -> [0,1) via x = lower + t/(1-t)
    auto g = [&f, lo = spec.lower](double t) {
      const double u = 1.0 - t;
      const double x = lo + t / u;
      return f(x) * (1.0 / (u * u));
    };
    IntegrationSpec mapped = spec;
    mapped.lower = 0.0;
    mapped.upper = 1.0 - 1e-14;
    mapped.osc_scale = 0.0;
    return detail::adapt_finite<T>(g, mapped.lower, mapped.upper, mapped);
  }
  return detail::adapt_finite<T>(f, spec.lower, spec.upper, spec);
}

/// Tensorized 2D integration: adaptive outer axis, each outer node resolved
/// by a full inner integrate_1d sharing the error budget.
template <class F>
auto integrate_2d(F&& f, const IntegrationSpec& spec_x, const IntegrationSpec& spec_y)
    -> QuadratureResult<std::decay_t<decltype(f(0.0, 0.0))>> {
  using T = std::decay_t<decltype(f(0.0, 0.0))>;
  spec_x.validate();
  spec_y.validate();

  long inner_evals = 0;
  double inner_err_max = 0.0;
  bool inner_ok = true;
  double inner_trunc = std::numeric_limits<double>::quiet_NaN();

  IntegrationSpec iy = spec_y;
  iy.rel_tol = 0.5 * spec_y.rel_tol;
  auto outer_f = [&](double x) {
    auto r = integrate_1d([&](double y) { return f(x, y); }, iy);
    inner_evals += r.evals;
    inner_err_max = std::max(inner_err_max, r.error_estimate);
    inner_ok = inner_ok && r.converged;
    if (r.truncation_point == r.truncation_point) inner_trunc = r.truncation_point;
    return r.value;
  };

  IntegrationSpec ox = spec_x;
  ox.rel_tol = 0.5 * spec_x.rel_tol;
  auto res = integrate_1d(outer_f, ox);

  double width = 0.0;
  if (std::isinf(spec_x.upper)) {
    if (res.truncation_point == res.truncation_point) width = res.truncation_point - spec_x.lower;
  } else {
    width = spec_x.upper - spec_x.lower;
  }
  res.error_estimate += inner_err_max * std::max(width, 1.0);
  res.evals += inner_evals;
  res.converged = res.converged && inner_ok;
  if (res.truncation_point != res.truncation_point) res.truncation_point = inner_trunc;
  return res;
}

}  // namespace ved
