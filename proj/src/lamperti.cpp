#include "stablepk/lamperti.hpp"

#include <cmath>
#include <vector>

#include <boost/math/special_functions/binomial.hpp>

#include "stablepk/gibbs.hpp"
#include "stablepk/specfun.hpp"
#include "stablepk/stable.hpp"

namespace stablepk::lamperti {

namespace {

constexpr double kPi = 3.14159265358979323846;

double binom(int k, int j) { return boost::math::binomial_coefficient<double>(k, j); }

// x^{2a} + 2 x^a cos(pi a) + 1
double bracket(double a, double x) {
  const double xa = std::pow(x, a);
  return xa * xa + 2.0 * xa * std::cos(kPi * a) + 1.0;
}

void check_nk(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw DomainError("need 1 <= k <= n");
}

// E[g(s B)] with B ~ Beta(1, n-1). For large s the integrand varies on the
// scale 1/s near 0, so panels double in width from there.
double beta1_scaled_expect(int n, double s, const std::function<double(double)>& g, const QuadConfig& cfg) {
  if (n == 1) return g(s);
  numerics::Integrand f = [&](double v) { return (n - 1) * std::pow(1.0 - v, n - 2) * g(s * v); };
  if (s <= 4.0) return numerics::quad_finite(f, 0.0, 1.0, cfg.without_hints());
  QuadConfig sub = cfg.without_hints();
  sub.abs_tol = cfg.abs_tol / 64.0;
  double lo = 0.0;
  double hi = 1.0 / s;
  double total = 0.0;
  while (lo < 1.0) {
    total += numerics::quad_finite(f, lo, std::min(hi, 1.0), sub);
    lo = hi;
    hi *= 2.0;
  }
  return total;
}

}  // namespace

double x_pdf(StabilityIndex alpha, double y) {
  if (!(y > 0)) throw DomainError("x_pdf: y must be positive");
  const double a = alpha.value();
  return std::sin(kPi * a) / kPi * std::pow(y, a - 1.0) / bracket(a, y);
}

double x_cdf(StabilityIndex alpha, double y) {
  if (!(y >= 0)) throw DomainError("x_cdf: y must be >= 0");
  if (y == 0) return 0.0;
  if (std::isinf(y)) return 1.0;
  const double a = alpha.value();
  const double ya = std::pow(y, a);
  return std::atan2(ya * std::sin(kPi * a), 1.0 + ya * std::cos(kPi * a)) / (kPi * a);
}

double x_cdf_acot(StabilityIndex alpha, double y) {
  if (!(y >= 0)) throw DomainError("x_cdf: y must be >= 0");
  const double a = alpha.value();
  const double arg = 1.0 / std::tan(kPi * a) + std::pow(y, a) / std::sin(kPi * a);
  // Principal inverse cotangent with range (0, pi).
  const double acot = std::atan2(1.0, arg);
  return 1.0 - acot / (kPi * a);
}

double delta_theta(StabilityIndex alpha, double theta, double x) {
  if (!(theta > 0)) throw DomainError("delta_theta: theta must be positive");
  if (!(x > 0)) throw DomainError("delta_theta: x must be positive");
  const double a = alpha.value();
  return std::sin(kPi * theta * x_cdf(alpha, x)) / kPi * std::pow(bracket(a, x), -theta / (2.0 * a));
}

void LampertiKernelArgs::validate() const {
  check_nk(n, k);
  if (j < 0 || j > k) throw DomainError("vartheta: need 0 <= j <= k");
}

int sin_half_pi(int m) {
  switch (((m % 4) + 4) % 4) {
    case 1:
      return 1;
    case 3:
      return -1;
    default:
      return 0;
  }
}

double vartheta(const LampertiKernelArgs& args, double x) {
  args.validate();
  if (!(x > 0)) throw DomainError("vartheta: x must be positive");
  const double a = args.alpha.value();
  const double xa = std::pow(x, a);
  const int kj = args.k - args.j;
  return std::pow(std::sin(kPi * a), kj) / kPi * std::pow(xa * std::cos(kPi * a) + 1.0, args.j) *
         std::pow(xa, kj) / std::pow(bracket(a, x), args.k);
}

namespace {

// \int_0^1 (1-x)^{n+theta-2} Delta_{theta + k alpha}(x) dx
double prop52_integral(StabilityIndex alpha, double theta, int n, int k, const QuadConfig& cfg) {
  const double th = theta + k * alpha.value();
  return numerics::beta_integral(0.0, n + theta - 2.0,
                                 [&](double x) { return x > 0 ? delta_theta(alpha, th, x) : 0.0; }, cfg);
}

double prop52_prefactor(StabilityIndex alpha, double theta, int n, int k) {
  const double a = alpha.value();
  return std::pow(a, k - 1) * std::exp(std::lgamma(theta / a + k) - std::lgamma(theta + n - 1.0));
}

}  // namespace

double lamperti_normalizer(StabilityIndex alpha, double theta, const QuadConfig& cfg) {
  const double a = alpha.value();
  if (!(theta > -a)) throw DomainError("lamperti: theta must exceed -alpha");
  if (theta == 0.0) return 2.0 * kPi * (1.0 + std::cos(kPi * a)) / std::sin(kPi * a);
  if (alpha.is_half()) return std::pow(2.0, 1.0 - theta) * kPi / std::tgamma(theta + 1.0);
  // V_{1,1} = (1 - alpha) V_{2,1} + V_{2,2} fixes the constant.
  const double v21 = prop52_prefactor(alpha, theta, 2, 1) * prop52_integral(alpha, theta, 2, 1, cfg);
  const double v22 = prop52_prefactor(alpha, theta, 2, 2) * prop52_integral(alpha, theta, 2, 2, cfg);
  return 1.0 / ((1.0 - a) * v21 + v22);
}

double lamperti_normalizer_direct(StabilityIndex alpha, double theta, const QuadConfig& cfg) {
  const double a = alpha.value();
  if (!(theta > -a)) throw DomainError("lamperti: theta must exceed -alpha");
  const QuadConfig inner = cfg.nested();
  const double integral = numerics::quad_halfline(
      [&](double t) {
        if (t <= 0) return 0.0;
        const double f = stable::pdf_kanter(alpha, t, inner);
        return std::pow(t, 1.0 - theta) * f * f;
      },
      cfg.nested().without_hints());
  return 1.0 / integral;
}

double x_theta_pdf_at_one(StabilityIndex alpha, double theta, const QuadConfig& cfg) {
  const double a = alpha.value();
  return std::exp(std::lgamma(theta + 1.0) - std::lgamma(theta / a + 1.0)) /
         lamperti_normalizer_direct(alpha, theta, cfg);
}

double lamperti_cond_v(StabilityIndex alpha, double theta, int n, int k, const QuadConfig& cfg) {
  check_nk(n, k);
  if (!(theta > -alpha.value())) throw DomainError("lamperti: theta must exceed -alpha");
  if (n == 1) return 1.0;
  return lamperti_normalizer(alpha, theta, cfg) * prop52_prefactor(alpha, theta, n, k) *
         prop52_integral(alpha, theta, n, k, cfg);
}

double lamperti_cond_v_expanded(StabilityIndex alpha, int n, int k, const QuadConfig& cfg) {
  check_nk(n, k);
  if (n == 1) return 1.0;
  const double c0 = lamperti_normalizer(alpha, 0.0, cfg);
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    const int s = sin_half_pi(k - j);
    if (s == 0) continue;
    const LampertiKernelArgs args{alpha, n, k, j};
    const double phi =
        c0 * numerics::beta_integral(0.0, n - 2.0, [&](double x) { return x > 0 ? vartheta(args, x) : 0.0; },
                                     cfg);
    sum += binom(k, j) * s * phi;
  }
  return std::pow(alpha.value(), k - 1) * std::exp(std::lgamma(k) - std::lgamma(n - 1.0)) * sum;
}

double lamperti_cond_v_first(StabilityIndex alpha, int n, const QuadConfig& cfg) {
  if (n < 2) throw DomainError("lamperti_cond_v_first: need n >= 2");
  const double a = alpha.value();
  const double integral = numerics::beta_integral(
      a, n - 2.0, [&](double x) { return 1.0 / bracket(a, x); }, cfg);
  return 2.0 * (1.0 + std::cos(kPi * a)) / std::tgamma(n - 1.0) * integral;
}

double lamperti_cond_v_half_2f1(double theta, int n, int k) {
  check_nk(n, k);
  if (!(theta > -0.5)) throw DomainError("lamperti: theta must exceed -1/2");
  const double a = theta + 0.5 * k + 1.0;
  const double b = theta + 0.5 * k + 0.5;
  const double c = theta + n + 0.5;
  const double pre = std::exp((theta + 1.0) * std::log(2.0) - std::lgamma(theta + 1.0) + std::lgamma(a) +
                              std::lgamma(b) - std::lgamma(c));
  return pre * specfun::gauss_2f1_neg1(a, b, c);
}

double psi(const LampertiKernelArgs& args, double w, const QuadConfig& cfg) {
  args.validate();
  if (args.n < 2) throw DomainError("psi: need n >= 2");
  if (!(w > 0)) throw DomainError("psi: w must be positive");
  // x = v / w turns the range (0, 1/w) into a Beta(1, n-1) expectation.
  const double e = numerics::beta_expect(
      1.0, args.n - 1.0, [&](double v) { return v > 0 ? vartheta(args, v / w) : 0.0; }, cfg);
  return e / w;
}

double psi_density(StabilityIndex alpha, int n, int k, double w, const QuadConfig& cfg) {
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    const int s = sin_half_pi(k - j);
    if (s == 0) continue;
    sum += binom(k, j) * s * psi({alpha, n, k, j}, w, cfg);
  }
  return sum;
}

double zeta(const LampertiKernelArgs& args, const std::function<double(double)>& g, const QuadConfig& cfg) {
  args.validate();
  const double a = args.alpha.value();
  const double ca = std::cos(kPi * a);
  const int kj = args.k - args.j;
  QuadConfig inner = cfg;
  inner.rel_tol = 1e-2 * cfg.rel_tol;
  auto inner_expect = [&](double r) {
    return beta1_scaled_expect(args.n, std::pow(r, -1.0 / a), g, inner);
  };
  numerics::Integrand f = [&](double r) {
    if (r <= 0) return 0.0;
    const double br = r * r + 2.0 * r * ca + 1.0;
    const double w = std::pow(r * ca + 1.0, args.j) * std::pow(r, kj - 1) / std::pow(br, args.k);
    if (w == 0.0) return 0.0;
    return inner_expect(r) * w;
  };
  const double integral = numerics::quad_halfline(f, cfg.with_hints(kj - 1.0, std::nullopt));
  return std::pow(std::sin(kPi * a), kj) / kPi * integral;
}

double lamperti_class_normalizer(StabilityIndex alpha, const std::function<double(double)>& g,
                                 const QuadConfig& cfg) {
  const double a = alpha.value();
  // X and 1/X share the law, so the half-line folds onto (0, 1).
  const double e = numerics::quad_finite(
      [&](double y) { return y > 0 ? (g(y) + g(1.0 / y)) * x_pdf(alpha, y) : 0.0; }, 0.0, 1.0,
      cfg.with_hints(a - 1.0, std::nullopt));
  if (!(e > 0) || !std::isfinite(e)) throw DomainError("lamperti class: E[g(X)] must be positive and finite");
  return 1.0 / e;
}

double lamperti_class_zeta_v(StabilityIndex alpha, int n, int k, const std::function<double(double)>& g,
                             const QuadConfig& cfg) {
  check_nk(n, k);
  if (n == 1) return 1.0;
  const double L = lamperti_class_normalizer(alpha, g, cfg);
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    const int s = sin_half_pi(k - j);
    if (s == 0) continue;
    sum += binom(k, j) * s * zeta({alpha, n, k, j}, g, cfg);
  }
  return std::pow(alpha.value(), k - 2) * std::exp(std::lgamma(k) - std::lgamma(n)) * L * sum;
}

double lamperti_class_vn1(StabilityIndex alpha, int n, const std::function<double(double)>& g,
                          const QuadConfig& cfg) {
  if (n < 1) throw DomainError("need n >= 1");
  if (n == 1) return 1.0;
  const double a = alpha.value();
  const double L = lamperti_class_normalizer(alpha, g, cfg);
  const QuadConfig inner = cfg.nested();
  auto inner_expect = [&](double y) {
    return beta1_scaled_expect(n, y, g, inner);
  };
  const double e = numerics::quad_finite(
      [&](double y) { return y > 0 ? (inner_expect(y) + inner_expect(1.0 / y)) * x_pdf(alpha, y) : 0.0; }, 0.0,
      1.0, cfg.nested().with_hints(a - 1.0, std::nullopt));
  return L * e / std::tgamma(n);
}

EppfValue lamperti_class_v(StabilityIndex alpha, int n, int k, const std::function<double(double)>& g,
                           const QuadConfig& qcfg, const McConfig& mcfg) {
  check_nk(n, k);
  EppfValue out;
  out.method = Method::quadrature;
  if (n == 1) {
    out.value = 1.0;
    out.check = Estimate{1.0, 0.0, Method::closed_form};
    return out;
  }
  out.value = lamperti_class_zeta_v(alpha, n, k, g, qcfg);
  const double L = lamperti_class_normalizer(alpha, g, qcfg);
  const double pre = std::pow(alpha.value(), k - 1) * std::exp(std::lgamma(k) - std::lgamma(n)) * L;
  auto est = numerics::mc_mean(
      [&](numerics::Rng& rng) {
        const auto d = numerics::sample_dirichlet(k, rng);
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += d[i] * stable::sample(alpha, rng) / stable::sample(alpha, rng);
        const double b = k == n ? 1.0 : numerics::sample_beta(k, n - k, rng);
        return g(b * s);
      },
      mcfg);
  out.check = Estimate{pre * est.mean, pre * est.std_error, Method::mc_direct};
  return out;
}

double ml_class_vn1(StabilityIndex alpha, double lambda, int n, const QuadConfig& cfg) {
  if (!(lambda > 0)) throw DomainError("ml_class: lambda must be positive");
  if (n < 1) throw DomainError("need n >= 1");
  if (n == 1) return 1.0;
  const double a = alpha.value();
  const QuadConfig inner = cfg.nested();
  const double e = numerics::beta_expect(
      1.0, n - 1.0,
      [&](double b) { return b > 0 ? specfun::mittag_leffler(alpha, std::pow(b, a) * lambda, inner) : 1.0; },
      cfg.nested());
  return e / (specfun::mittag_leffler(alpha, lambda, cfg) * std::tgamma(n));
}

double ml_class_vnk_direct(StabilityIndex alpha, double lambda, int n, int k, const QuadConfig& cfg) {
  check_nk(n, k);
  if (!(lambda > 0)) throw DomainError("ml_class: lambda must be positive");
  if (n == 1) return 1.0;
  const double a = alpha.value();
  const double e = numerics::beta_expect(
      k * a, n - k * a, [&](double b) { return specfun::gen_mittag_leffler(alpha, k, std::pow(b, a) * lambda); },
      cfg);
  return std::pow(a, k - 1) * std::exp(std::lgamma(k) - std::lgamma(n)) * e /
         specfun::mittag_leffler(alpha, lambda, cfg);
}

EppfValue ml_class_v(StabilityIndex alpha, double lambda, int n, int k, const QuadConfig& cfg) {
  check_nk(n, k);
  EppfValue out;
  out.method = Method::quadrature;
  if (k == 1) {
    out.value = ml_class_vn1(alpha, lambda, n, cfg);
    out.check = Estimate{ml_class_vnk_direct(alpha, lambda, n, 1, cfg), 0.0, Method::quadrature};
    return out;
  }
  out.value = ml_class_vnk_direct(alpha, lambda, n, k, cfg);
  std::vector<double> column(n);
  for (int m = 1; m <= n; ++m) column[m - 1] = ml_class_vn1(alpha, lambda, m, cfg);
  const auto table = gibbs::forward_recursion(alpha, column);
  out.check = Estimate{table[n - 1][k - 1], 0.0, Method::quadrature};
  return out;
}

}  // namespace stablepk::lamperti
