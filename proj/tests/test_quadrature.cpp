#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "ved/quadrature.hpp"

using ved::IntegrationSpec;
using ved::integrate_1d;
using ved::integrate_2d;

namespace {

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

IntegrationSpec finite(double a, double b, double rel = 1e-10, double abs = 1e-14) {
  IntegrationSpec s;
  s.lower = a;
  s.upper = b;
  s.rel_tol = rel;
  s.abs_tol = abs;
  return s;
}

}  // namespace

TEST_CASE("polynomial antiderivative") {
  auto r = integrate_1d([](double w) { return w; }, finite(0.0, 1.0));
  REQUIRE(r.converged);
  CHECK(r.value == Catch::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("odd integrand on symmetric interval vanishes") {
  auto r = integrate_1d([](double w) { return w * std::cos(3.0 * w) + w * w * w; },
                        finite(-1.0, 1.0));
  REQUIRE(r.converged);
  CHECK(std::abs(r.value) <= 1e-14);
}

TEST_CASE("oscillatory Gaussian tail on semi-infinite domain") {
  // int_0^inf e^{-w^2} cos(10 w) dw = (sqrt(pi)/2) e^{-25}
  const double expected = 1.2307869792307557e-11;
  IntegrationSpec s;
  s.lower = 0.0;
  s.upper = std::numeric_limits<double>::infinity();
  s.rel_tol = 1e-10;
  s.abs_tol = 1e-24;
  s.osc_scale = 10.0;
  s.envelope = [](double w) { return std::exp(-w * w); };
  auto r = integrate_1d([](double w) { return std::exp(-w * w) * std::cos(10.0 * w); }, s);
  REQUIRE(r.converged);
  REQUIRE(std::isfinite(r.truncation_point));
  // the result sits eleven orders below the integrand scale; double roundoff
  // across panels bounds the achievable relative accuracy near 1e-5
  CHECK(r.value == Catch::Approx(expected).epsilon(1e-4));
}

TEST_CASE("mapped transform handles semi-infinite domain without envelope") {
  IntegrationSpec s;
  s.lower = 0.0;
  s.upper = std::numeric_limits<double>::infinity();
  s.rel_tol = 1e-10;
  s.abs_tol = 1e-14;
  auto r = integrate_1d([](double w) { return std::exp(-w); }, s);
  REQUIRE(r.converged);
  CHECK(r.value == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("non-convergence is flagged, never silent") {
  IntegrationSpec s = finite(0.0, 1.0, 1e-15, 1e-300);
  s.max_evals = 60;
  auto r = integrate_1d([](double w) { return std::cos(200.0 * w * w); }, s);
  CHECK_FALSE(r.converged);
  CHECK(r.evals <= 90);
}

TEST_CASE("converged result respects its own error estimate") {
  auto r = integrate_1d([](double w) { return std::sin(7.0 * w) * std::exp(w); },
                        finite(0.0, 3.0, 1e-9, 1e-14));
  REQUIRE(r.converged);
  CHECK(r.error_estimate <= std::max(1e-14, 1e-9 * std::abs(r.value)));
}

TEST_CASE("complex integrands") {
  auto r = integrate_1d(
      [](double w) { return std::complex<double>(std::cos(w), std::sin(w)); },
      finite(0.0, M_PI / 2));
  REQUIRE(r.converged);
  CHECK(r.value.real() == Catch::Approx(1.0).epsilon(1e-10));
  CHECK(r.value.imag() == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("2d unit box") {
  auto r = integrate_2d([](double, double) { return 1.0; }, finite(0.0, 1.0), finite(0.0, 1.0));
  REQUIRE(r.converged);
  CHECK(r.value == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("2d separable product matches 1d x 1d") {
  auto g = [](double x) { return std::exp(-x) * std::cos(2.0 * x); };
  auto h = [](double y) { return y * y + 0.3; };
  auto r2 = integrate_2d([&](double x, double y) { return g(x) * h(y); }, finite(0.0, 2.0),
                         finite(0.0, 1.5));
  auto rx = integrate_1d(g, finite(0.0, 2.0));
  auto ry = integrate_1d(h, finite(0.0, 1.5));
  REQUIRE(r2.converged);
  const double tol = r2.error_estimate + std::abs(rx.value) * ry.error_estimate +
                     std::abs(ry.value) * rx.error_estimate + 1e-12;
  CHECK(std::abs(r2.value - rx.value * ry.value) <= tol);
}

TEST_CASE("2d semi-infinite: p^2 q^2 exp(-(p+q)^2) equals 1/30") {
  // the v-integration identity: int dp dq p^2 q^2 F(p+q) = (1/30) int dw w^5 F(w),
  // with int_0^inf w^5 e^{-w^2} dw = 1
  IntegrationSpec s;
  s.lower = 0.0;
  s.upper = std::numeric_limits<double>::infinity();
  s.rel_tol = 1e-9;
  s.abs_tol = 1e-12;
  s.envelope = [](double t) { return (t * t * t * t + 1.0) * std::exp(-t * t); };
  auto r = integrate_2d([](double p, double q) { return p * p * q * q * std::exp(-(p + q) * (p + q)); },
                        s, s);
  REQUIRE(r.converged);
  CHECK(r.value == Catch::Approx(1.0 / 30.0).epsilon(1e-7));
}

TEST_CASE("linearity within combined error estimates") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 4.0 * uniform(rng) - 2.0;
    const double b = 4.0 * uniform(rng) - 2.0;
    const double k = 1.0 + 6.0 * uniform(rng);
    auto f = [k](double x) { return std::sin(k * x); };
    auto g = [k](double x) { return std::exp(-x * x) * std::cos(k * x); };
    auto rf = integrate_1d(f, finite(0.0, 2.0));
    auto rg = integrate_1d(g, finite(0.0, 2.0));
    auto rc = integrate_1d([&](double x) { return a * f(x) + b * g(x); }, finite(0.0, 2.0));
    const double tol = 2.0 * (std::abs(a) * rf.error_estimate + std::abs(b) * rg.error_estimate +
                              rc.error_estimate) + 1e-13;
    CHECK(std::abs(rc.value - (a * rf.value + b * rg.value)) <= tol);
  }
}

TEST_CASE("interval additivity at interior split points") {
  std::mt19937_64 rng(7);
  auto f = [](double x) { return std::cos(9.0 * x) / (1.0 + x * x); };
  auto whole = integrate_1d(f, finite(-1.0, 3.0));
  for (int trial = 0; trial < 10; ++trial) {
    const double c = -1.0 + 4.0 * uniform(rng);
    auto left = integrate_1d(f, finite(-1.0, c));
    auto right = integrate_1d(f, finite(c, 3.0));
    const double tol =
        whole.error_estimate + left.error_estimate + right.error_estimate + 1e-13;
    CHECK(std::abs(whole.value - (left.value + right.value)) <= tol);
  }
}

TEST_CASE("tightening rel_tol moves a converged value at most by the looser estimate") {
  auto f = [](double x) { return std::sin(15.0 * x) * std::exp(-0.3 * x) + 0.2 * x; };
  auto loose = integrate_1d(f, finite(0.0, 4.0, 1e-6, 1e-14));
  auto tight = integrate_1d(f, finite(0.0, 4.0, 1e-7, 1e-14));
  REQUIRE(loose.converged);
  REQUIRE(tight.converged);
  CHECK(std::abs(loose.value - tight.value) <= loose.error_estimate + 1e-15);
}

TEST_CASE("osc_scale caps initial panel width") {
  // with a quarter-period cap the cos(w L) factor cannot alias away:
  // int_0^{2pi} cos(40 x) dx = 0 exactly; a single G7K15 panel would miss it
  IntegrationSpec s = finite(0.0, 2.0 * M_PI, 1e-10, 1e-13);
  s.osc_scale = 40.0;
  auto r = integrate_1d([](double x) { return std::cos(40.0 * x); }, s);
  REQUIRE(r.converged);
  CHECK(std::abs(r.value) <= 1e-12);
}

TEST_CASE("spec validation") {
  IntegrationSpec bad;
  bad.lower = 1.0;
  bad.upper = 0.0;
  CHECK_THROWS_AS(integrate_1d([](double) { return 0.0; }, bad), std::invalid_argument);
  IntegrationSpec bad2 = finite(0.0, 1.0);
  bad2.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate_1d([](double) { return 0.0; }, bad2), std::invalid_argument);
}
