#include "stablepk/betagamma.hpp"

#include <cmath>

#include "stablepk/stable.hpp"

namespace stablepk::betagamma {

namespace {

void check_nk(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw DomainError("need 1 <= k <= n");
}

// alpha^{k-1} Gamma(theta+1) Gamma(theta/alpha+k) / (Gamma(theta/alpha+1) Gamma(n+theta))
double prefactor(double a, double theta, int n, int k) {
  return std::pow(a, k - 1) * std::exp(std::lgamma(theta + 1.0) + std::lgamma(theta / a + k) -
                                       std::lgamma(theta / a + 1.0) - std::lgamma(n + theta));
}

// E[g(G_c beta^alpha)] with beta ~ Beta(theta+alpha, m-alpha).
double expect_quad(const BetaGammaSpec& spec, double c, int m, const QuadConfig& cfg) {
  const double a = spec.alpha.value();
  const QuadConfig inner = cfg.nested();
  return numerics::beta_expect(
      spec.theta + a, m - a,
      [&](double b) {
        const double ba = std::pow(b, a);
        return numerics::gamma_expect(c, [&](double x) { return spec.g(x * ba); }, inner);
      },
      cfg.nested());
}

}  // namespace

void BetaGammaSpec::validate() const {
  if (!(theta > -alpha.value())) throw DomainError("beta-gamma: theta must exceed -alpha");
  if (!g) throw DomainError("beta-gamma: g is empty");
}

std::pair<double, double> mellin_identity_check(StabilityIndex alpha, double theta, double s) {
  const double a = alpha.value();
  if (!(theta > -a)) throw DomainError("mellin: theta must exceed -alpha");
  if (!(theta + s > -a) || !(theta + 1.0 + s > 0)) throw DomainError("mellin: s outside the moment domain");
  const double c = (theta + a) / a;
  const double lhs = std::exp(std::lgamma(c + s / a) - std::lgamma(c));
  const double gamma_part = std::exp(std::lgamma(theta + 1.0 + s) - std::lgamma(theta + 1.0));
  const stable::TiltedStable ts(alpha, theta);
  return {lhs, gamma_part * ts.negative_moment(s)};
}

double bg_inverse_normalizer(const BetaGammaSpec& spec, const QuadConfig& cfg) {
  spec.validate();
  const double inv = expect_quad(spec, spec.theta / spec.alpha.value() + 1.0, 1, cfg);
  if (!(inv > 0) || !std::isfinite(inv)) throw DomainError("beta-gamma: normalizer must be positive and finite");
  return inv;
}

EppfValue bg_v(const BetaGammaSpec& spec, int n, int k, const QuadConfig& cfg) {
  spec.validate();
  check_nk(n, k);
  EppfValue out;
  if (n == 1) {
    out.value = 1.0;
    out.method = Method::closed_form;
    return out;
  }
  const double a = spec.alpha.value();
  const double e = expect_quad(spec, spec.theta / a + k, n, cfg);
  out.value = prefactor(a, spec.theta, n, k) * e / bg_inverse_normalizer(spec, cfg);
  out.method = Method::quadrature;
  return out;
}

EppfValue bg_v(const BetaGammaSpec& spec, int n, int k, const McConfig& cfg) {
  spec.validate();
  check_nk(n, k);
  EppfValue out;
  out.method = Method::mc_direct;
  if (n == 1) {
    out.value = 1.0;
    out.method = Method::closed_form;
    return out;
  }
  const double a = spec.alpha.value();
  const double th = spec.theta;
  auto bm = numerics::run_batches(2, cfg, [&](numerics::Rng& rng, double* o) {
    const double b1 = numerics::sample_beta(th + a, 1.0 - a, rng);
    const double g1 = numerics::sample_gamma(th / a + 1.0, rng);
    const double bn = numerics::sample_beta(th + a, n - a, rng);
    const double gk = numerics::sample_gamma(th / a + k, rng);
    o[0] = spec.g(gk * std::pow(bn, a));
    o[1] = spec.g(g1 * std::pow(b1, a));
  });
  const double pre = prefactor(a, th, n, k);
  const auto est = numerics::reduce(bm, [pre](const double* m) { return pre * m[0] / m[1]; });
  out.value = est.mean;
  out.std_error = est.std_error;
  return out;
}

double hermite_type_integral(StabilityIndex alpha, double theta, double lambda, int n, int k,
                             const QuadConfig& cfg) {
  const double a = alpha.value();
  if (!(lambda > 0)) throw DomainError("hermite type: lambda must be positive");
  if (!(theta > -a)) throw DomainError("hermite type: theta must exceed -alpha");
  check_nk(n, k);
  const double c = theta / a + k;
  return numerics::beta_integral(theta + a - 1.0, n - a - 1.0,
                                 [&](double u) { return std::pow(1.0 + lambda * std::pow(u, a), -c); }, cfg);
}

EppfValue hermite_type_v(StabilityIndex alpha, double theta, double lambda, int n, int k, const QuadConfig& cfg) {
  const double a = alpha.value();
  if (!(lambda > 0)) throw DomainError("hermite type: lambda must be positive");
  if (!(theta > -a)) throw DomainError("hermite type: theta must exceed -alpha");
  check_nk(n, k);
  const double i1 = numerics::beta_integral(
      theta + a - 1.0, -a, [&](double u) { return std::pow(1.0 + lambda * std::pow(u, a), -(theta / a + 1.0)); },
      cfg);
  const double inv_sigma =
      std::exp(std::lgamma(theta + 1.0) - std::lgamma(theta + a) - std::lgamma(1.0 - a)) * i1;
  const double phi = std::pow(a, k - 1) *
                     std::exp(std::lgamma(theta + 1.0) + std::lgamma(theta / a + k) - std::lgamma(theta / a + 1.0) -
                              std::lgamma(theta + a) - std::lgamma(n - a)) /
                     inv_sigma;
  EppfValue out;
  out.method = Method::quadrature;
  out.value = phi * hermite_type_integral(alpha, theta, lambda, n, k, cfg);
  return out;
}

}  // namespace stablepk::betagamma
