#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "stablepk/gibbs.hpp"
#include "stablepk/specfun.hpp"

using namespace stablepk;
using namespace stablepk::specfun;

TEST_CASE("rising factorials") {
  CHECK(rising(1.0, 3) == 6.0);
  CHECK(rising(0.37, 0) == 1.0);
  CHECK(rising(0.5, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rising(0.3, 5) == doctest::Approx(0.3 * 1.3 * 2.3 * 3.3 * 4.3).epsilon(1e-13));
  CHECK(ln_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
}

TEST_CASE("generalized hypergeometric series") {
  CHECK(pfq({{}, {}, 1.0}) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(pfq({{0.7}, {}, 0.0}) == 1.0);
  CHECK(pfq({{1.0, 1.0}, {2.0}, -1.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("2F1 at -1") {
  for (double a : {-0.4, 0.3, 2.5, 4.0}) {
    CHECK(gauss_2f1_neg1(a, 1.0, 2.0) == doctest::Approx((std::pow(2.0, 1.0 - a) - 1.0) / (1.0 - a)).epsilon(1e-12));
  }
  CHECK(gauss_2f1_neg1(0.0, 0.7, 1.9) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gauss_2f1_neg1(1.0, 1.0, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // Euler integral by an independent Simpson rule
  const double a = 3.5, b = 1.5, c = 2.75;
  const double euler = oracle::simpson_two_sided(
      [&](double r) { return std::pow(r, b - 1) * std::pow(1 - r, c - b - 1) * std::pow(1 + r, -a); }, 0.0, 1.0);
  const double beta = std::tgamma(b) * std::tgamma(c - b) / std::tgamma(c);
  CHECK(gauss_2f1_neg1(a, b, c) == doctest::Approx(euler / beta).epsilon(1e-8));
}

TEST_CASE("Kummer U") {
  for (double a : {0.4, 1.0, 2.7}) {
    CHECK(kummer_u(a, a + 1.0, 1.3) == doctest::Approx(std::pow(1.3, -a)).epsilon(1e-11));
  }
  // e E_1(1)
  CHECK(kummer_u(1.0, 1.0, 1.0) == doctest::Approx(0.59634736232319407434).epsilon(1e-11));
  const double a = 2.3, b = 0.5, z = 1.7;
  CHECK(kummer_u(a, b, z) == doctest::Approx(std::pow(z, 1 - b) * kummer_u(1 + a - b, 2 - b, z)).epsilon(1e-11));
  CHECK_THROWS_AS(kummer_u(1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("Hermite function") {
  for (double lam : {0.3, 1.0, 4.0}) CHECK(hermite_h(0.0, lam) == doctest::Approx(1.0).epsilon(1e-12));
  // h_{-1}(lambda) = sqrt(pi/2) e^{lambda^2/2} erfc(lambda/sqrt 2)
  const double lam = 0.8;
  CHECK(hermite_h(-1.0, lam) ==
        doctest::Approx(std::sqrt(std::numbers::pi / 2) * std::exp(lam * lam / 2) * std::erfc(lam / std::sqrt(2.0)))
            .epsilon(1e-10));
  for (int n = 2; n <= 5; ++n) {
    for (int k = 1; k <= n; ++k) {
      const double l = 1.3;
      const double t = 0.5 / (l * l);
      CHECK(std::pow(2.0, n - k) * std::pow(l, k - 1) * hermite_h(k + 1 - 2 * n, l) ==
            doctest::Approx(gibbs::cond_g_half_closed(n, k, t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("Mittag-Leffler function") {
  CHECK(mittag_leffler(0.4, 0.0) == 1.0);
  const double e_erfc = std::exp(1.0) * std::erfc(1.0);
  CHECK(e_erfc == doctest::Approx(0.427584).epsilon(1e-6));
  CHECK(mittag_leffler(0.5, 1.0) == doctest::Approx(e_erfc).epsilon(1e-10));
  CHECK(mittag_leffler(0.3, 2.0) == doctest::Approx(mittag_leffler_series(0.3, 2.0)).epsilon(1e-8));
  // independent series in long double
  long double s = 0;
  for (int l = 0; l < 80; ++l) s += std::pow(-1.0L, l) / std::tgamma(1.0L + l * 0.5L);
  CHECK(mittag_leffler_series(0.5, 1.0) == doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
  CHECK_THROWS_AS(mittag_leffler(0.5, -1.0), DomainError);
}

TEST_CASE("generalized Mittag-Leffler functional") {
  for (int k : {1, 2, 4}) CHECK(gen_mittag_leffler(0.5, k, 0.0) == 1.0);
  double prev = 1.0;
  for (int i = 1; i <= 20; ++i) {
    const double v = gen_mittag_leffler(0.6, 2, 0.25 * i);
    CHECK(v < prev);
    prev = v;
  }
  const double lam = 0.8;
  numerics::McConfig cfg;
  cfg.n_samples = 1000000;
  cfg.seed = 77;
  const auto mc = numerics::mc_mean(
      [lam](numerics::Rng& r) {
        return std::exp(-lam * lam * numerics::sample_gamma(1.0, r) / numerics::sample_gamma(0.5, r));
      },
      cfg);
  CHECK_MC(mc, gen_mittag_leffler(0.5, 1, lam));
}

TEST_CASE("modified Bessel functions") {
  CHECK(bessel_i(0.5, 1e-6) / std::pow(0.5e-6, 0.5) == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-9));
  CHECK(bessel_k(0.5, 1.3) == doctest::Approx(std::sqrt(std::numbers::pi / 2.6) * std::exp(-1.3)).epsilon(1e-10));
  CHECK(bessel_k(0.7, 2.0) == doctest::Approx(bessel_k(-0.7, 2.0)).epsilon(1e-13));
  // I_{1/2}(z) = sqrt(2/(pi z)) sinh z
  CHECK(bessel_i(0.5, 3.0) == doctest::Approx(std::sqrt(2 / (std::numbers::pi * 3.0)) * std::sinh(3.0)).epsilon(1e-12));
  CHECK(bessel_i_scaled(0.3, 40.0) == doctest::Approx(bessel_i(0.3, 40.0) * std::exp(-40.0)).epsilon(1e-10));
  CHECK_THROWS_AS(bessel_k(0.5, 0.0), DomainError);
}
