#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ved/quadrature.hpp"
#include "ved/windows.hpp"

using namespace ved;

namespace {

// direct numeric transform of eval_time, the independent check on the
// closed forms: eps~(nu) = int dt eps(t) e^{i nu t} = 2 int_0^inf eps(t) cos(nu t) dt
double numeric_transform(const WindowProfile& w, double nu, double t_max) {
  IntegrationSpec s;
  s.lower = 0.0;
  s.upper = t_max;
  s.rel_tol = 1e-12;
  s.abs_tol = 1e-15;
  s.osc_scale = std::max(nu, 1.0);
  auto r = integrate_1d([&](double t) { return eval_time(w, t) * std::cos(nu * t); }, s);
  return 2.0 * r.value;
}

}  // namespace

TEST_CASE("gaussian window basics") {
  auto w = WindowProfile::gaussian(0.7, 1.3);
  CHECK(eval_time(w, 0.0) == Catch::Approx(0.7).epsilon(1e-15));
  // transform at zero frequency is eps0 T sqrt(2 pi)
  CHECK(eval_transform(w, 0.0) == Catch::Approx(0.7 * 1.3 * std::sqrt(2.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("temporal symmetry for all families") {
  const WindowProfile ws[] = {
      WindowProfile::gaussian(1.0, 1.0),
      WindowProfile::gaussian(0.5, 2.0, 3.0),
      WindowProfile::superosc_comb(1.0, 1.0, 4, 6.0, 0.03),
      WindowProfile::superosc_comb(0.8, 1.0, 2, 10.0, 0.07, 5.0),
  };
  for (const auto& w : ws)
    for (double t : {0.1, 0.37, 0.5, 1.2, 2.9})
      CHECK(eval_time(w, t) == Catch::Approx(eval_time(w, -t)).margin(1e-15));
}

TEST_CASE("transform evenness on a grid") {
  const WindowProfile ws[] = {
      WindowProfile::gaussian(1.0, 1.0, 2.0),
      WindowProfile::superosc_comb(1.0, 1.0, 6, 8.0, 0.02),
      WindowProfile::superosc_comb(1.0, 2.0, 4, 5.0, 0.05, 4.5),
  };
  for (const auto& w : ws) {
    for (int i = 0; i <= 200; ++i) {
      const double nu = 0.05 * i;
      const double d = std::abs(eval_transform(w, nu) - eval_transform(w, -nu));
      CHECK(d <= 1e-10 * std::max(1.0, std::abs(eval_transform(w, nu))));
    }
  }
}

TEST_CASE("closed-form transform matches direct numeric transform") {
  SECTION("gaussian") {
    auto w = WindowProfile::gaussian(1.0, 1.0);
    for (double nu : {0.0, 0.5, 1.7, 3.0}) {
      const double closed = eval_transform(w, nu);
      const double numeric = numeric_transform(w, nu, 14.0);
      CHECK(numeric == Catch::Approx(closed).epsilon(1e-8));
    }
  }
  SECTION("modulated gaussian") {
    auto w = WindowProfile::gaussian(0.9, 1.0, 2.5);
    for (double nu : {0.0, 1.0, 2.5, 4.0}) {
      const double closed = eval_transform(w, nu);
      const double numeric = numeric_transform(w, nu, 14.0);
      CHECK(numeric == Catch::Approx(closed).epsilon(1e-8).margin(1e-12));
    }
  }
  SECTION("superosc comb") {
    auto w = WindowProfile::superosc_comb(1.0, 1.0, 4, 8.0, 0.04);
    for (double nu : {0.0, 1.0, 3.3, 7.0, 12.0}) {
      const double closed = eval_transform(w, nu);
      const double numeric = numeric_transform(w, nu, 0.5 + 9.0 * 0.04);
      CHECK(numeric == Catch::Approx(closed).epsilon(1e-8).margin(1e-12));
    }
  }
  SECTION("modulated superosc comb") {
    auto w = WindowProfile::superosc_comb(1.0, 1.0, 2, 9.0, 0.08, 4.2);
    for (double nu : {0.0, 2.0, 4.2, 6.5}) {
      const double closed = eval_transform(w, nu);
      const double numeric = numeric_transform(w, nu, 0.5 + 9.0 * 0.08);
      CHECK(numeric == Catch::Approx(closed).epsilon(1e-8).margin(1e-12));
    }
  }
}

TEST_CASE("pure phase case: N=2, a=1 gives constant magnitude before smoothing") {
  // (cos x + i sin x)^N = e^{iNx}: the comb polynomial has |.| = 1, so the
  // transform magnitude is the smoothing factor alone
  auto w = WindowProfile::superosc_comb(1.0, 1.0, 2, 1.0, 0.05);
  for (double nu : {0.3, 1.1, 2.7, 5.0}) {
    const double mag = std::abs(eval_transform(w, nu));
    const double smooth = std::exp(-0.5 * nu * nu * 0.05 * 0.05);
    // Re e^{i nu T/2} = cos(nu T/2)
    CHECK(mag == Catch::Approx(smooth * std::abs(std::cos(nu * 0.5))).margin(1e-12));
  }
}

TEST_CASE("envelope bound dominates the transform") {
  const WindowProfile ws[] = {
      WindowProfile::gaussian(1.0, 1.0),
      WindowProfile::gaussian(1.0, 1.0, 3.0),
      WindowProfile::superosc_comb(1.0, 1.0, 4, 10.0, 0.03),
      WindowProfile::superosc_comb(1.0, 1.0, 6, 16.0, 0.02, 5.0),
  };
  for (const auto& w : ws) {
    for (int i = 0; i <= 400; ++i) {
      const double nu = 0.1 * i;
      CHECK(envelope_bound(w, nu) >= std::abs(eval_transform(w, nu)) * (1.0 - 1e-12));
    }
    // monotone decaying beyond the band
    double prev = envelope_bound(w, w.modulation);
    for (int i = 1; i <= 100; ++i) {
      const double cur = envelope_bound(w, w.modulation + 0.3 * i);
      CHECK(cur <= prev * (1.0 + 1e-12));
      prev = cur;
    }
  }
  // unmodulated comb bound has the stated closed form
  auto w = WindowProfile::superosc_comb(1.0, 1.0, 4, 10.0, 0.03);
  const double nu = 7.0;
  CHECK(envelope_bound(w, nu) ==
        Catch::Approx(std::pow(1.0 + 100.0, 2.0) * std::exp(-0.5 * nu * nu * 0.03 * 0.03)));
}

TEST_CASE("parseval consistency") {
  // int eps(t)^2 dt = (1/2pi) int eps~(nu)^2 dnu
  const WindowProfile ws[] = {
      WindowProfile::gaussian(1.0, 1.0),
      WindowProfile::superosc_comb(1.0, 1.0, 2, 6.0, 0.08),
  };
  for (const auto& w : ws) {
    IntegrationSpec st;
    st.lower = 0.0;
    st.upper = (w.family == WindowFamily::Gaussian) ? 12.0 : 0.5 + 10.0 * 0.08;
    st.rel_tol = 1e-10;
    st.abs_tol = 1e-14;
    auto time_side = integrate_1d([&](double t) { return eval_time(w, t) * eval_time(w, t); }, st);
    IntegrationSpec sf;
    sf.lower = 0.0;
    sf.upper = std::numeric_limits<double>::infinity();
    sf.rel_tol = 1e-10;
    sf.abs_tol = 1e-14;
    sf.envelope = [&](double nu) {
      const double b = envelope_bound(w, nu);
      return b * b;
    };
    auto freq_side = integrate_1d(
        [&](double nu) {
          const double e = eval_transform(w, nu);
          return e * e;
        },
        sf);
    const double lhs = 2.0 * time_side.value;
    const double rhs = 2.0 * freq_side.value / (2.0 * M_PI);
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-6));
  }
}

TEST_CASE("comb time support") {
  // spike train lives in [-T/2, T/2] up to smoothing tails; 9 sigma beyond
  // the support the largest weight's Gaussian tail is below eps0 * 1e-12
  auto w = WindowProfile::superosc_comb(1.0, 1.0, 4, 10.0, 0.02);
  const double edge = 0.5 + 9.0 * 0.02;
  for (double t = edge; t < edge + 0.4; t += 0.01)
    CHECK(std::abs(eval_time(w, t)) < 1e-12);
}

TEST_CASE("synthesis: a = 2L/T and band crossings on target") {
  const double L = 5.0, T = 1.0;
  auto syn = synthesize_superosc(L, T, 20, T / (2 * 20) / 3.2, 0.0, 1.0);
  CHECK(syn.window.so.speedup == Catch::Approx(10.0));
  REQUIRE(syn.band_half_width > 0.0);
  // crossings near the band center spaced pi/L within 10%
  CHECK(syn.target_spacing == Catch::Approx(M_PI / L));
  CHECK(syn.band_half_width >= M_PI / L);  // at least one on-target spacing measured
  // amplitude cost: off-band magnitude exceeds the band-center value
  CHECK(syn.amplitude_cost >= 1.0);
}

TEST_CASE("synthesis degenerate case a=1") {
  // L = T/2 requested: no superoscillation, local period 2 pi/(T/2)
  const double T = 1.0;
  auto syn = synthesize_superosc(T / 2.0, T, 4, T / (2 * 4) / 4.0, 0.0, 1.0);
  CHECK(syn.window.so.speedup == Catch::Approx(1.0));
  // pure phase case: crossings of cos(nu T/2) are spaced 2pi/T = pi/L exactly
  CHECK(syn.band_half_width > 0.0);
}

TEST_CASE("window validation") {
  CHECK_THROWS_AS(WindowProfile::superosc_comb(1.0, 1.0, 3, 5.0, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(WindowProfile::superosc_comb(1.0, 1.0, 4, 0.5, 0.02), std::invalid_argument);
  // sigma >= delta/3 rejected
  CHECK_THROWS_AS(WindowProfile::superosc_comb(1.0, 1.0, 4, 5.0, 1.0 / 8.0 / 3.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(synthesize_superosc(0.4, 1.0, 4, 0.01, 0.0, 1.0), std::invalid_argument);
}
