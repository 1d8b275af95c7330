#include "stablepk/excursion.hpp"

#include <algorithm>
#include <cmath>

#include "stablepk/gibbs.hpp"
#include "stablepk/specfun.hpp"

namespace stablepk::excursion {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_nk(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw DomainError("need 1 <= k <= n");
}

std::vector<EppfValue> row_from_column(StabilityIndex alpha, const std::vector<double>& column, int n) {
  const auto table = gibbs::forward_recursion(alpha, column);
  std::vector<EppfValue> row(n);
  for (int k = 1; k <= n; ++k) {
    row[k - 1].value = table[n - 1][k - 1];
    row[k - 1].method = Method::quadrature;
  }
  return row;
}

}  // namespace

double kolmogorov_cdf(double x) {
  if (!(x > 0)) return 0.0;
  if (x < 1.0) {
    // Dual theta series: (sqrt(2 pi)/x) sum_{l>=1} exp(-(2l-1)^2 pi^2 / (8 x^2)).
    const double c = kPi * kPi / (8.0 * x * x);
    double sum = 0.0;
    for (int l = 1; l < 100; ++l) {
      const double m = 2.0 * l - 1.0;
      const double t = std::exp(-m * m * c);
      sum += t;
      if (t < 1e-17 * sum) break;
    }
    return std::min(1.0, std::sqrt(2.0 * kPi) / x * sum);
  }
  double sum = 0.0;
  for (int l = 1; l < 100; ++l) {
    const double t = std::exp(-2.0 * l * l * x * x);
    sum += (l % 2 ? -t : t);
    if (t < 1e-16) break;
  }
  return std::max(0.0, 1.0 + 2.0 * sum);
}

double kolmogorov_pdf(double x) {
  if (!(x > 0)) return 0.0;
  if (x < 1.0) {
    const double c = kPi * kPi / 8.0;
    double sum = 0.0;
    for (int l = 1; l < 100; ++l) {
      const double m2 = (2.0 * l - 1.0) * (2.0 * l - 1.0);
      const double t = std::exp(-m2 * c / (x * x));
      const double d = t * (2.0 * m2 * c / (x * x * x * x) - 1.0 / (x * x));
      sum += d;
      if (t < 1e-17) break;
    }
    return std::sqrt(2.0 * kPi) * sum;
  }
  double sum = 0.0;
  for (int l = 1; l < 100; ++l) {
    const double t = 8.0 * l * l * x * std::exp(-2.0 * l * l * x * x);
    sum += (l % 2 ? t : -t);
    if (t < 1e-16) break;
  }
  return sum;
}

double mbr_quantile(double u) {
  if (!(u > 0 && u < 1)) throw DomainError("mbr_quantile: u must lie in (0,1)");
  double lo = 0.05;
  double hi = 10.0;
  double x = 0.8;
  // Newton steps kept inside a shrinking bracket; bisection when a step leaves it.
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double f = kolmogorov_cdf(x) - u;
    if (f > 0) {
      hi = x;
    } else {
      lo = x;
    }
    const double d = kolmogorov_pdf(x);
    double next = d > 0 ? x - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-13) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double mbr_sample(Rng& rng) { return mbr_quantile(numerics::sample_uniform(rng)); }

McEstimate p_nk(StabilityIndex alpha, double tau, int n, int k, const McConfig& cfg) {
  check_nk(n, k);
  if (!(tau > 0)) throw DomainError("p_nk: tau must be positive");
  const double a = alpha.value();
  return numerics::mc_mean(
      [&](Rng& rng) {
        const double g = numerics::sample_gamma(k - 0.5, rng);
        const double m = mbr_sample(rng);
        const double b = numerics::sample_beta(0.5 * a, n - a, rng);
        return 2.0 * g * m * m <= std::pow(b, -a) * tau ? 1.0 : 0.0;
      },
      cfg);
}

double tanh_expect(StabilityIndex alpha, double tau, int n, const QuadConfig& cfg) {
  if (n < 1) throw DomainError("need n >= 1");
  if (!(tau > 0)) throw DomainError("tau must be positive");
  const double a = alpha.value();
  const double st = std::sqrt(tau);
  return numerics::beta_expect(
      0.5 * a, n - a, [&](double b) { return b > 0 ? std::tanh(st * std::pow(b, -0.5 * a)) : 1.0; }, cfg);
}

double kolmogorov_vn1(StabilityIndex alpha, double tau, int n, const QuadConfig& cfg) {
  if (n == 1) return 1.0;
  const double a = alpha.value();
  return std::exp(std::lgamma(1.0 - 0.5 * a) - std::lgamma(n - 0.5 * a)) * tanh_expect(alpha, tau, n, cfg) /
         tanh_expect(alpha, tau, 1, cfg);
}

EppfValue kolmogorov_v(StabilityIndex alpha, double tau, int n, int k, const QuadConfig& qcfg,
                       const McConfig& mcfg) {
  check_nk(n, k);
  const double a = alpha.value();
  std::vector<double> column(n);
  for (int m = 1; m <= n; ++m) column[m - 1] = kolmogorov_vn1(alpha, tau, m, qcfg);
  const auto table = gibbs::forward_recursion(alpha, column);
  EppfValue out;
  out.check = Estimate{table[n - 1][k - 1], 0.0, Method::quadrature};
  if (k == 1) {
    out.value = column[n - 1];
    out.method = Method::quadrature;
    return out;
  }
  const double pre = std::pow(a, k - 1) *
                     std::exp(std::lgamma(1.0 - 0.5 * a) + std::lgamma(k - 0.5) - std::lgamma(0.5) -
                              std::lgamma(n - 0.5 * a)) /
                     tanh_expect(alpha, tau, 1, qcfg);
  const auto p = p_nk(alpha, tau, n, k, mcfg);
  out.value = pre * p.mean;
  out.std_error = pre * p.std_error;
  out.method = Method::mc_direct;
  return out;
}

double h_minus_delta(double delta, double x) {
  if (!(delta > 0 && delta < 1)) throw DomainError("h_minus_delta: delta must lie in (0,1)");
  if (!(x > 0)) throw DomainError("h_minus_delta: x must be positive");
  return specfun::bessel_i_scaled(-delta, x) / specfun::bessel_i_scaled(delta, x);
}

double bessel_tail(double delta, double x) {
  if (!(delta > 0 && delta < 1)) throw DomainError("bessel_tail: delta must lie in (0,1)");
  if (!(x > 0)) throw DomainError("bessel_tail: x must be positive");
  // 1 - I_delta/I_{-delta} = (2/pi) sin(pi delta) K_delta / I_{-delta}, free of cancellation.
  const double r = 2.0 / kPi * std::sin(kPi * delta) * specfun::bessel_k_scaled(delta, x) /
                   specfun::bessel_i_scaled(-delta, x) * std::exp(-2.0 * x);
  return std::clamp(r, 0.0, 1.0);
}

void BesselBridgeModel::validate() const {
  if (!(delta > 0 && delta < 1)) throw DomainError("bessel bridge: delta must lie in (0,1)");
  if (!(w > 0)) throw DomainError("bessel bridge: w must be positive");
  if (j < 1) throw DomainError("bessel bridge: j must be >= 1");
}

namespace {

double bessel_expect(const BesselBridgeModel& m, int n, const QuadConfig& cfg) {
  const double a = m.alpha.value();
  return numerics::beta_expect(
      a * m.delta, n - a,
      [&](double b) { return b > 0 ? std::pow(bessel_tail(m.delta, m.w * std::pow(b, -0.5 * a)), m.j) : 0.0; },
      cfg);
}

}  // namespace

double bessel_bridge_vn1(const BesselBridgeModel& m, int n, const QuadConfig& cfg) {
  m.validate();
  if (n < 1) throw DomainError("need n >= 1");
  if (n == 1) return 1.0;
  const double a = m.alpha.value();
  const double th = (1.0 - m.delta) * a;
  return std::exp(std::lgamma(1.0 - th) - std::lgamma(n - th)) * bessel_expect(m, n, cfg) /
         bessel_expect(m, 1, cfg);
}

std::vector<EppfValue> bessel_bridge_v(const BesselBridgeModel& m, int n, const QuadConfig& cfg) {
  std::vector<double> column(n);
  for (int i = 1; i <= n; ++i) column[i - 1] = bessel_bridge_vn1(m, i, cfg);
  return row_from_column(m.alpha, column, n);
}

double bessel_bridge_clipped_mass(const BesselBridgeModel& m) {
  m.validate();
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = m.w * std::pow(10.0, 0.02 * i);
    const double raw = 1.0 - 1.0 / h_minus_delta(m.delta, x);
    worst = std::max({worst, -raw, raw - 1.0});
  }
  return worst;
}

void GenericMu::validate() const {
  if (!(delta > 0 && delta < 1)) throw DomainError("generic mu: delta must lie in (0,1)");
  if (!(kappa > 0)) throw DomainError("generic mu: kappa must be positive");
  if (!(w > 0)) throw DomainError("generic mu: w must be positive");
  if (j < 1) throw DomainError("generic mu: j must be >= 1");
  if (!mu) throw DomainError("generic mu: mu is empty");
}

double generic_mu_vn1(const GenericMu& m, int n, const QuadConfig& cfg) {
  m.validate();
  if (n < 1) throw DomainError("need n >= 1");
  if (n == 1) return 1.0;
  const double a = m.alpha.value();
  auto expect = [&](int nn) {
    return numerics::beta_expect(
        a * m.delta, nn - a,
        [&](double b) {
          if (b <= 0) return 1.0;
          const double u = m.mu(m.w * std::pow(b, -a * m.kappa));
          if (u < 0) throw DomainError("generic mu: mu returned a negative value");
          if (std::isinf(u)) return 1.0;
          return std::pow(u / (1.0 + u), m.j);
        },
        cfg);
  };
  const double th = (1.0 - m.delta) * a;
  return std::exp(std::lgamma(1.0 - th) - std::lgamma(n - th)) * expect(n) / expect(1);
}

std::vector<EppfValue> generic_mu_v(const GenericMu& m, int n, const QuadConfig& cfg) {
  std::vector<double> column(n);
  for (int i = 1; i <= n; ++i) column[i - 1] = generic_mu_vn1(m, i, cfg);
  return row_from_column(m.alpha, column, n);
}

}  // namespace stablepk::excursion
