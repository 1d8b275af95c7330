#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "stablepk/betagamma.hpp"
#include "stablepk/gibbs.hpp"
#include "stablepk/model_spec.hpp"

using namespace stablepk;
using namespace stablepk::betagamma;

namespace {
numerics::McConfig mc(std::uint64_t seed, std::size_t n = 400000) {
  numerics::McConfig c;
  c.n_samples = n;
  c.seed = seed;
  return c;
}
}  // namespace

TEST_CASE("Mellin identity") {
  const auto zero = mellin_identity_check(0.4, 0.3, 0.0);
  CHECK(zero.first == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(zero.second == doctest::Approx(1.0).epsilon(1e-15));
  const auto six = mellin_identity_check(0.5, 0.5, 1.0);
  CHECK(six.first == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(six.second == doctest::Approx(6.0).epsilon(1e-13));
  for (double a : {0.3, 0.6}) {
    for (double th : {-0.1, 0.0, 1.5}) {
      for (double s : {0.3, 1.0, 2.4}) {
        const auto [l, r] = mellin_identity_check(a, th, s);
        CHECK(l == doctest::Approx(r).epsilon(1e-12));
        CHECK(l == doctest::Approx(std::tgamma((th + s + a) / a) / std::tgamma((th + a) / a)).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(mellin_identity_check(0.5, 0.5, -2.0), DomainError);
}

TEST_CASE("beta-gamma class, g = 1") {
  const BetaGammaSpec spec{0.5, 1.0, [](double) { return 1.0; }};
  CHECK(bg_inverse_normalizer(spec) == doctest::Approx(1.0).epsilon(1e-10));
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k <= n; ++k) {
      CHECK(bg_v(spec, n, k, numerics::QuadConfig{}).value ==
            doctest::Approx(oracle::pd_weight(0.5, 1.0, n, k)).epsilon(1e-9));
    }
  }
  const auto vt = gibbs::build_vtable(0.5, gibbs::BetaGamma{1.0, named_function("one")}, 6);
  CHECK(std::abs(gibbs::enumerate_check(vt, 6).sum - 1.0) < 1e-8);
}

TEST_CASE("beta-gamma class, g = 1/(1+x)") {
  const BetaGammaSpec spec{0.6, 0.2, [](double x) { return 1.0 / (1.0 + x); }};
  CHECK(bg_v(spec, 1, 1, numerics::QuadConfig{}).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bg_v(spec, 1, 1, mc(1)).value == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<std::vector<EppfValue>> t(6);
  for (int n = 1; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) t[n - 1].push_back(bg_v(spec, n, k, mc(100 + 10 * n + k)));
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k <= n; ++k) {
      const auto& a = t[n - 1][k - 1];
      const auto& b = t[n][k - 1];
      const auto& c = t[n][k];
      const double r = a.value - (n - k * 0.6) * b.value - c.value;
      const double se = std::sqrt(a.std_error * a.std_error + std::pow((n - k * 0.6) * b.std_error, 2) +
                                  c.std_error * c.std_error);
      CHECK(std::abs(r) <= 3 * se);
    }
  }
  // quadrature against Monte Carlo on a small grid
  const std::pair<int, int> cells[] = {{2, 1}, {2, 2}, {3, 2}, {4, 1}, {4, 3}, {5, 2}};
  for (const auto& [n, k] : cells) {
    const auto q = bg_v(spec, n, k, numerics::QuadConfig{});
    const auto m = t[n - 1][k - 1];
    CHECK(std::abs(q.value - m.value) <= 3 * m.std_error);
  }
}

TEST_CASE("Hermite-type class") {
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k <= n; ++k) {
      CHECK(hermite_type_v(0.5, 0.5, 1e-8, n, k).value ==
            doctest::Approx(oracle::pd_weight(0.5, 0.5, n, k)).epsilon(1e-5));
    }
  }
  CHECK(hermite_type_v(0.5, 0.5, 1.0, 1, 1).value == doctest::Approx(1.0).epsilon(1e-12));
  const BetaGammaSpec spec{0.5, 0.5, [](double x) { return std::exp(-x); }};
  const auto m = bg_v(spec, 4, 2, mc(9, 1000000));
  CHECK(std::abs(m.value - hermite_type_v(0.5, 0.5, 1.0, 4, 2).value) <= 3 * m.std_error);
  // integral against a direct Simpson rule
  const double a = 0.5, th = 0.5, lam = 1.0;
  const int n = 4, k = 2;
  const double ref = oracle::simpson_graded([&](double u) {
    return std::pow(1 + lam * std::pow(u, a), -(th / a + k)) * std::pow(u, th + a - 1) * std::pow(1 - u, n - a - 1);
  }, 0.0, 1.0, 4.0);
  CHECK(hermite_type_integral(a, th, lam, n, k) == doctest::Approx(ref).epsilon(1e-8));
  CHECK_THROWS_AS(hermite_type_v(0.5, 0.5, -1.0, 2, 1), DomainError);
}
