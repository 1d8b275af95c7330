#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "stablepk/stable.hpp"

using namespace stablepk;
using namespace stablepk::stable;
using numerics::McConfig;
using numerics::Rng;

namespace {

double tilted_moment(double a, double th, double d) {
  return std::tgamma((th + d) / a + 1) * std::tgamma(th + 1) / (std::tgamma(th + d + 1) * std::tgamma(th / a + 1));
}

McConfig mc(std::uint64_t seed, std::size_t n = 1000000) {
  McConfig c;
  c.n_samples = n;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("Kanter function") {
  // [sin(pi a u)/sin(pi u)]^{1/(1-a)} sin((1-a) pi u)/sin(pi a u) by hand at a = u = 1/2
  CHECK(kanter_fn(0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  const double a = 0.5;
  const double limit = std::pow(a, 1 / (1 - a)) * (1 - a) / a;
  CHECK(kanter_limit_at_zero(a) == doctest::Approx(limit).epsilon(1e-14));
  CHECK(kanter_fn(a, 1e-8) == doctest::Approx(limit).epsilon(1e-7));
  for (int i = 1; i <= 9; ++i) {
    const double al = 0.1 * i;
    bool positive = true;
    for (int j = 1; j < 1000; ++j) positive = positive && kanter_fn(al, j / 1000.0) > 0;
    CHECK(positive);
  }
}

TEST_CASE("stable density") {
  CHECK(pdf(0.5, 1.0) == doctest::Approx(std::exp(-0.25) / (2 * std::sqrt(std::numbers::pi))).epsilon(1e-14));
  CHECK(pdf(0.5, 1.0) == doctest::Approx(0.219695).epsilon(1e-6));
  for (double t : {0.1, 1.0, 10.0}) CHECK(pdf_kanter(0.5, t) == doctest::Approx(oracle::half_pdf(t)).epsilon(1e-6));
  for (double a : {0.3, 0.7}) {
    // (1, inf) through t = v^{-1/alpha}, which flattens the t^{-1-alpha} tail
    const double mass = oracle::simpson([a](double s) { return pdf(a, std::exp(s)) * std::exp(s); }, -40.0, 0.0, 4000) +
                        oracle::simpson([a](double v) {
                          if (v <= 0) return 1.0 / std::tgamma(1 - a);
                          return pdf(a, std::pow(v, -1 / a)) * std::pow(v, -1 / a - 1) / a;
                        }, 0.0, 1.0, 2000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
  const double lt = numerics::quad_halfline([](double t) { return std::exp(-t) * pdf(0.6, t); });
  CHECK(lt == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("closed-form density at one half") {
  for (double lam : {0.5, 1.0, 2.0}) {
    const double lt = oracle::simpson([lam](double u) {
      if (u <= 0 || u >= 1) return 0.0;
      const double t = u / (1 - u);
      return pdf_half(t) * std::exp(-lam * t) / ((1 - u) * (1 - u));
    }, 0.0, 1.0, 40000);
    CHECK(lt == doctest::Approx(std::exp(-std::sqrt(lam))).epsilon(1e-8));
  }
  const double h = 1e-5;
  auto slope = [h](double t) { return pdf_half(t + h) - pdf_half(t - h); };
  CHECK(slope(1.0 / 6 - 0.01) > 0);
  CHECK(slope(1.0 / 6 + 0.01) < 0);
}

TEST_CASE("stable sampler") {
  for (double a : {0.3, 0.5, 0.7}) {
    CHECK_MC(numerics::mc_mean([a](Rng& r) { return std::exp(-sample(a, r)); }, mc(100 + static_cast<int>(10 * a))),
             std::exp(-1.0));
  }
  CHECK_MC(numerics::mc_mean([](Rng& r) { return std::pow(sample(0.5, r), -0.5); }, mc(7)),
           2.0 / std::sqrt(std::numbers::pi));
  Rng r1(21), r2(22);
  std::vector<double> x, y;
  for (int i = 0; i < 100000; ++i) {
    x.push_back(sample(0.5, r1));
    y.push_back(1.0 / (4.0 * numerics::sample_gamma(0.5, r2)));
  }
  const double d = numerics::ks_two_sample(x, y);
  CHECK(numerics::ks_passes_1pct(d, 50000.0));
}

TEST_CASE("polynomially tilted law") {
  const TiltedStable ts(0.5, 1.0);
  const double mass = numerics::quad_halfline([&](double t) { return tilted_pdf(ts, t); },
                                              numerics::QuadConfig{}.with_scale(0.2));
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  const TiltedStable ts0(0.4, 0.0);
  for (double t : {0.3, 2.0}) CHECK(tilted_pdf(ts0, t) == doctest::Approx(pdf(0.4, t)).epsilon(1e-12));
  const double m = numerics::quad_halfline([&](double t) { return std::pow(t, -0.7) * tilted_pdf(ts, t); },
                                           numerics::QuadConfig{}.with_scale(0.2));
  CHECK(m == doctest::Approx(tilted_moment(0.5, 1.0, 0.7)).epsilon(1e-6));
  CHECK(ts.negative_moment(0.7) == doctest::Approx(tilted_moment(0.5, 1.0, 0.7)).epsilon(1e-12));
}

TEST_CASE("tilted expectations by importance sampling") {
  const TiltedStable ts(0.5, 0.5);
  const auto one = tilted_expect(ts, std::function<double(double)>([](double) { return 1.0; }), mc(3, 100000));
  CHECK(one.mean == doctest::Approx(1.0).epsilon(1e-14));
  const auto m = tilted_expect(ts, std::function<double(double)>([](double s) { return std::pow(s, -0.3); }), mc(4));
  CHECK_MC(m, std::tgamma(0.8 / 0.5 + 1) * std::tgamma(1.5) / (std::tgamma(1.8) * std::tgamma(2.0)));
  const auto e = tilted_expect(TiltedStable(0.5, 0.0), std::function<double(double)>([](double s) { return std::exp(-s); }),
                               mc(5));
  CHECK_MC(e, std::exp(-1.0));
  CHECK(m.normalizer_exact == doctest::Approx(std::tgamma(2.0) / std::tgamma(1.5)).epsilon(1e-14));
  CHECK(m.warning.empty());
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(StabilityIndex(1.2), DomainError);
  CHECK_THROWS_AS(pdf(0.5, -1.0), DomainError);
  CHECK_THROWS_AS(TiltedStable(0.5, -0.6), DomainError);
}
