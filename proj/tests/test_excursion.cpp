#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "stablepk/excursion.hpp"
#include "stablepk/gibbs.hpp"

using namespace stablepk;
using namespace stablepk::excursion;
using numerics::Rng;

namespace {
numerics::McConfig mc(std::uint64_t seed, std::size_t n = 1000000) {
  numerics::McConfig c;
  c.n_samples = n;
  c.seed = seed;
  return c;
}

// 1 - 2 sum (-1)^{l-1} e^{-2 l^2 x^2}
double kolmogorov_series(double x) {
  double s = 0;
  for (int l = 1; l < 200; ++l) s += (l % 2 ? 1.0 : -1.0) * std::exp(-2.0 * l * l * x * x);
  return 1 - 2 * s;
}
}  // namespace

TEST_CASE("Kolmogorov distribution") {
  CHECK(kolmogorov_cdf(5.0) > 1 - 1e-16);
  CHECK(kolmogorov_cdf(0.5) == doctest::Approx(0.0360547563).epsilon(1e-8));
  for (double x : {0.6, 1.0, 1.8}) CHECK(kolmogorov_cdf(x) == doctest::Approx(kolmogorov_series(x)).epsilon(1e-13));
  bool increasing = true;
  for (int i = 1; i < 100; ++i) increasing = increasing && kolmogorov_cdf(0.03 * (i + 1)) > kolmogorov_cdf(0.03 * i);
  CHECK(increasing);
  const double h = 1e-5;
  CHECK(kolmogorov_pdf(0.9) == doctest::Approx((kolmogorov_cdf(0.9 + h) - kolmogorov_cdf(0.9 - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("bridge maximum sampler") {
  Rng rng(17);
  std::vector<double> x(100000);
  for (auto& v : x) v = mbr_sample(rng);
  CHECK(numerics::ks_passes_1pct(numerics::ks_statistic(x, kolmogorov_cdf), 100000));
  const double m = mbr_quantile(0.5);
  CHECK(kolmogorov_cdf(m) == doctest::Approx(0.5).epsilon(1e-12));
  const auto below = numerics::mc_mean([m](Rng& r) { return mbr_sample(r) <= m ? 1.0 : 0.0; }, mc(18, 200000));
  CHECK_MC(below, 0.5);
  for (double y : {0.5, 1.0, 2.0}) {
    const auto est = numerics::mc_mean(
        [y](Rng& r) { return std::abs(numerics::sample_normal(r)) * mbr_sample(r) <= y ? 1.0 : 0.0; },
        mc(19 + static_cast<int>(4 * y)));
    CHECK_MC(est, std::tanh(y));
  }
}

TEST_CASE("probabilities p_{n,k}") {
  const auto p11 = p_nk(0.5, 1.0, 1, 1, mc(40));
  CHECK_MC(p11, tanh_expect(0.5, 1.0, 1));
  // tanh expectation by direct Simpson over the beta density
  const double a = 0.5;
  const int n = 3;
  const double ref = oracle::simpson_graded([&](double b) {
    return std::tanh(std::pow(b, -a / 2)) * std::pow(b, a / 2 - 1) * std::pow(1 - b, n - a - 1);
  }, 0.0, 1.0, 2 / a) * std::tgamma(n - a / 2) / (std::tgamma(a / 2) * std::tgamma(n - a));
  CHECK(tanh_expect(a, 1.0, n) == doctest::Approx(ref).epsilon(1e-8));
  CHECK(p_nk(0.5, 1e4, 3, 2, mc(41, 100000)).mean > 0.99);
  std::map<std::pair<int, int>, numerics::McEstimate> p;
  for (int m = 1; m <= 5; ++m)
    for (int k = 1; k <= m; ++k) p[{m, k}] = p_nk(a, 1.0, m, k, mc(50 + 10 * m + k, 200000));
  for (int m = 1; m <= 4; ++m) {
    for (int k = 1; k <= m; ++k) {
      const double c = (m - a / 2) / ((k - 0.5) * a);
      const auto &x = p[{m, k}], &y = p[{m + 1, k}], &z = p[{m + 1, k + 1}];
      const double r = z.mean - c * (x.mean - y.mean) - y.mean;
      const double se = std::sqrt(z.std_error * z.std_error + std::pow(c * x.std_error, 2) +
                                  std::pow((1 - c) * y.std_error, 2));
      CHECK(std::abs(r) <= 3 * se);
    }
  }
}

TEST_CASE("Kolmogorov model weights") {
  CHECK(kolmogorov_v(0.5, 1.0, 1, 1).value == 1.0);
  const auto v42 = kolmogorov_v(0.5, 1.0, 4, 2, {}, mc(60, 400000));
  REQUIRE(v42.check.has_value());
  CHECK(std::abs(v42.value - v42.check->value) <= 3 * std::hypot(v42.std_error, v42.check->std_error));
  const auto vt = gibbs::build_vtable(0.5, gibbs::Kolmogorov{1.0}, 4);
  const auto rep = gibbs::enumerate_check(vt, 4);
  CHECK(std::abs(rep.sum - 1.0) <= 3 * rep.sum_std_error + 1e-8);
}

TEST_CASE("Bessel ratio") {
  for (double x : {0.5, 2.0}) CHECK(h_minus_delta(0.5, x) == doctest::Approx(1.0 / std::tanh(x)).epsilon(1e-12));
  CHECK(std::abs(h_minus_delta(0.3, 50.0) - 1.0) < 1e-6);
  const double x1 = 1e-3, x2 = 1e-4;
  const double slope = std::log(h_minus_delta(0.3, x2) / h_minus_delta(0.3, x1)) / std::log(x2 / x1);
  CHECK(slope == doctest::Approx(-0.6).epsilon(1e-3));
  CHECK(h_minus_delta(0.3, 1e-4) ==
        doctest::Approx(std::pow(0.5e-4, -0.6) * std::tgamma(1.3) / std::tgamma(0.7)).epsilon(1e-3));
  // the tail probability 1 - I_delta/I_{-delta}; at delta = 1/2 it is 1 - tanh
  for (double x : {0.05, 0.7, 3.0, 30.0}) CHECK(bessel_tail(0.5, x) == doctest::Approx(1 - std::tanh(x)).epsilon(1e-10));
  bool in_range = true;
  for (int i = 1; i <= 200; ++i) {
    const double t = bessel_tail(0.3, 0.05 * i);
    in_range = in_range && t >= 0 && t <= 1;
  }
  CHECK(in_range);
}

TEST_CASE("Bessel bridge model") {
  const BesselBridgeModel m{0.5, 0.5, 1.0, 1};
  CHECK(bessel_bridge_vn1(m, 1) == 1.0);
  CHECK(bessel_bridge_clipped_mass(m) < 1e-10);
  // P(|N| M >= w beta^{-1/4}) ratio by simulation at delta = 1/2
  const double a = 0.5;
  auto tail = [a](int n, std::uint64_t seed) {
    return numerics::mc_mean(
        [a, n](Rng& r) {
          const double b = numerics::sample_beta(a / 2, n - a, r);
          return std::abs(numerics::sample_normal(r)) * mbr_sample(r) >= std::pow(b, -a / 2) ? 1.0 : 0.0;
        },
        mc(seed));
  };
  const auto num = tail(3, 70), den = tail(1, 71);
  const double pre = std::tgamma(1 - a / 2) / std::tgamma(3 - a / 2);
  const double est = pre * num.mean / den.mean;
  const double se = est * std::hypot(num.std_error / num.mean, den.std_error / den.mean);
  CHECK(std::abs(bessel_bridge_vn1(m, 3) - est) <= 3 * se);
  const auto vt = gibbs::build_vtable(0.5, gibbs::BesselBridge{0.3, 1.0, 2}, 4);
  CHECK(std::abs(gibbs::enumerate_check(vt, 4).sum - 1.0) < 1e-6);
  CHECK(vt.cert.passed);
}

TEST_CASE("generic mu") {
  const double a = 0.4, d = 0.3;
  GenericMu g{a, d, 0.5, 2, [](double) { return 1.7; }, 1.0};
  for (int n = 1; n <= 5; ++n) {
    CHECK(generic_mu_vn1(g, n) ==
          doctest::Approx(std::tgamma(1 - (1 - d) * a) / std::tgamma(n - (1 - d) * a)).epsilon(1e-10));
  }
  // mu/(1+mu) = tanh recovers the Kolmogorov model at tau = w^2
  GenericMu k{0.5, 0.5, 0.5, 1, [](double y) { return std::expm1(2 * y) / 2; }, 1.3};
  for (int n = 2; n <= 4; ++n) CHECK(generic_mu_vn1(k, n) == doctest::Approx(kolmogorov_vn1(0.5, 1.69, n)).epsilon(1e-8));
  CHECK(generic_mu_v(k, 1)[0].value == 1.0);
  GenericMu bad{0.5, 0.5, 0.5, 1, [](double) { return -1.0; }, 1.0};
  CHECK_THROWS_AS(generic_mu_vn1(bad, 3), DomainError);
}
