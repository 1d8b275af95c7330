#include "stablepk/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <mpfr.h>

namespace stablepk::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_nonpositive_integer(double x) { return x <= 0 && x == std::floor(x); }

class Mp {
 public:
  explicit Mp(mpfr_prec_t bits) { mpfr_init2(v, bits); }
  ~Mp() { mpfr_clear(v); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  mpfr_t v;
};

// Yields Gamma(1 + j*alpha) for j = 0, 1, 2, ... in order. For rational
// alpha = m/r the values in each residue class j mod r follow from the
// functional equation, so mpfr_gamma is called at most r times.
class GammaSequence {
 public:
  GammaSequence(const StabilityIndex& alpha, mpfr_prec_t bits) : alpha_(alpha), bits_(bits) {
    if (alpha.rational()) {
      m_ = alpha.rational()->first;
      r_ = alpha.rational()->second;
    }
  }

  // Writes Gamma(1 + j*alpha) for the next j into out.
  void next(mpfr_t out) {
    const long j = j_++;
    if (r_ == 0) {
      Mp x(bits_);
      mpfr_set_d(x.v, alpha_.value(), MPFR_RNDN);
      mpfr_mul_si(x.v, x.v, j, MPFR_RNDN);
      mpfr_add_ui(x.v, x.v, 1, MPFR_RNDN);
      mpfr_gamma(out, x.v, MPFR_RNDN);
      return;
    }
    const long s = j % r_;
    const long q = j / r_;
    if (q == 0) {
      // x_s = 1 + s m / r, exactly rational.
      auto x = std::make_unique<Mp>(bits_);
      mpfr_set_si(x->v, s * m_, MPFR_RNDN);
      mpfr_div_si(x->v, x->v, r_, MPFR_RNDN);
      mpfr_add_ui(x->v, x->v, 1, MPFR_RNDN);
      auto g = std::make_unique<Mp>(bits_);
      mpfr_gamma(g->v, x->v, MPFR_RNDN);
      xs_.push_back(std::move(x));
      gs_.push_back(std::move(g));
    } else {
      // Gamma(x + m) = Gamma(x) x (x+1) ... (x+m-1).
      Mp f(bits_);
      for (long i = 0; i < m_; ++i) {
        mpfr_add_si(f.v, xs_[s]->v, i, MPFR_RNDN);
        mpfr_mul(gs_[s]->v, gs_[s]->v, f.v, MPFR_RNDN);
      }
      mpfr_add_si(xs_[s]->v, xs_[s]->v, m_, MPFR_RNDN);
    }
    mpfr_set(out, gs_[s]->v, MPFR_RNDN);
  }

 private:
  StabilityIndex alpha_;
  mpfr_prec_t bits_;
  long m_ = 0, r_ = 0, j_ = 0;
  std::vector<std::unique_ptr<Mp>> xs_, gs_;
};

// sum_{l>=0} (-lambda)^l C(k+l, l) / Gamma(1 + (k+l) alpha), in MPFR.
// log_term(l) bounds term magnitudes in double and fixes the precision.
double mp_ml_sum(const StabilityIndex& alpha, int k, double lambda) {
  const double a = alpha.value();
  auto log_term = [&](long l) {
    return l * std::log(lambda) + std::lgamma(k + l + 1.0) - std::lgamma(l + 1.0) -
           std::lgamma(k + 1.0) - std::lgamma(1.0 + (k + l) * a);
  };
  double peak = 0.0;
  long n_terms = 0;
  double prev = log_term(0);
  for (long l = 1;; ++l) {
    const double lt = log_term(l);
    peak = std::max(peak, lt);
    if (lt < prev && lt < -90.0) {
      n_terms = l + 1;
      break;
    }
    prev = lt;
    if (l > 50000000) throw SeriesError("Mittag-Leffler series too long", 0.0, l);
  }
  const auto bits =
      std::max<mpfr_prec_t>(static_cast<mpfr_prec_t>((peak + 90.0) / std::log(2.0) + 64.0), 128);
  GammaSequence gam(alpha, bits);
  Mp g(bits), sum(bits), pw(bits), binom(bits), term(bits), lam(bits);
  mpfr_set_d(lam.v, lambda, MPFR_RNDN);
  for (int j = 0; j < k; ++j) gam.next(g.v);
  mpfr_set_ui(sum.v, 0, MPFR_RNDN);
  mpfr_set_ui(pw.v, 1, MPFR_RNDN);
  mpfr_set_ui(binom.v, 1, MPFR_RNDN);
  for (long l = 0; l < n_terms; ++l) {
    if (l > 0) {
      mpfr_mul(pw.v, pw.v, lam.v, MPFR_RNDN);
      mpfr_mul_si(binom.v, binom.v, k + l, MPFR_RNDN);
      mpfr_div_si(binom.v, binom.v, l, MPFR_RNDN);
    }
    gam.next(g.v);
    mpfr_mul(term.v, pw.v, binom.v, MPFR_RNDN);
    mpfr_div(term.v, term.v, g.v, MPFR_RNDN);
    if (l % 2 == 0) {
      mpfr_add(sum.v, sum.v, term.v, MPFR_RNDN);
    } else {
      mpfr_sub(sum.v, sum.v, term.v, MPFR_RNDN);
    }
  }
  return mpfr_get_d(sum.v, MPFR_RNDN);
}

// log I_nu(z) for nu > -1, where every series term is positive. Summation
// starts at the largest term so that large z does not overflow.
double log_bessel_i_positive(double nu, double z) {
  const double h = 0.5 * z;
  const double h2 = h * h;
  auto ratio = [&](double m) { return h2 / ((m + 1.0) * (m + nu + 1.0)); };
  // Largest term: first m with ratio < 1.
  const double disc = (nu + 2.0) * (nu + 2.0) - 4.0 * (nu + 1.0 - h2);
  double mstar = 0.0;
  if (disc > 0) mstar = std::max(0.0, std::ceil((-(nu + 2.0) + std::sqrt(disc)) / 2.0));
  const double log_peak = (2.0 * mstar + nu) * std::log(h) - std::lgamma(mstar + 1.0) -
                          std::lgamma(mstar + nu + 1.0);
  double s = 1.0;
  double t = 1.0;
  for (double m = mstar - 1.0; m >= 0.0; m -= 1.0) {
    t /= ratio(m);
    s += t;
    if (t < 1e-18 * s) break;
  }
  t = 1.0;
  for (double m = mstar;; m += 1.0) {
    t *= ratio(m);
    s += t;
    if (t < 1e-18 * s) break;
  }
  return log_peak + std::log(s);
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0)) throw DomainError("ln_gamma: argument must be positive");
  return std::lgamma(x);
}

double rising(double a, int n) {
  if (n < 0) throw DomainError("rising: n must be >= 0");
  if (n == 0) return 1.0;
  if (n <= 64) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= a + i;
    return p;
  }
  if (a > 0) return std::exp(std::lgamma(a + n) - std::lgamma(a));
  double lg = 0.0;
  int sign = 1;
  for (int i = 0; i < n; ++i) {
    const double f = a + i;
    if (f == 0.0) return 0.0;
    if (f < 0) sign = -sign;
    lg += std::log(std::abs(f));
  }
  return sign * std::exp(lg);
}

double gamma_ratio(double a, double b) {
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    throw DomainError("gamma_ratio: pole of Gamma");
  }
  int sa = 1, sb = 1;
  const double la = boost::math::lgamma(a, &sa);
  const double lb = boost::math::lgamma(b, &sb);
  return sa * sb * std::exp(la - lb);
}

void PfqParams::validate() const {
  for (double x : b) {
    if (is_nonpositive_integer(x)) throw DomainError("pfq: lower parameter is a non-positive integer");
  }
  const bool terminating =
      std::any_of(a.begin(), a.end(), [](double x) { return is_nonpositive_integer(x); });
  if (terminating) return;
  if (a.size() > b.size() + 1) throw DomainError("pfq: p > q + 1 outside polynomial case");
  if (a.size() == b.size() + 1 && std::abs(z) > 1) throw DomainError("pfq: |z| > 1 with p = q + 1");
}

double pfq(const PfqParams& P, double tol) {
  P.validate();
  if (P.z == 0.0) return 1.0;
  const bool terminating =
      std::any_of(P.a.begin(), P.a.end(), [](double x) { return is_nonpositive_integer(x); });
  const bool boundary = !terminating && P.a.size() == P.b.size() + 1 && std::abs(P.z) == 1.0;
  if (boundary) {
    const double s = std::accumulate(P.b.begin(), P.b.end(), 0.0) -
                     std::accumulate(P.a.begin(), P.a.end(), 0.0);
    if ((P.z > 0 && s <= 0) || (P.z < 0 && s <= -1)) {
      throw SeriesError("pfq: series diverges on |z| = 1", 0.0, 0);
    }
  }
  auto ratio = [&](long l) {
    double r = P.z / (l + 1.0);
    for (double x : P.a) r *= x + l;
    for (double x : P.b) r /= x + l;
    return r;
  };
  double sum = 0.0, t = 1.0;
  long l = 0;
  if (boundary && P.z < 0) {
    // Alternating boundary series: sum until signs settle, then average
    // partial sums repeatedly (Euler transform).
    double shift = 0.0;
    for (double x : P.a) shift = std::max(shift, -x);
    for (double x : P.b) shift = std::max(shift, -x);
    const long start = static_cast<long>(std::ceil(shift)) + 8;
    for (; l < start; ++l) {
      sum += t;
      t *= ratio(l);
    }
    constexpr int kM = 96;
    std::vector<double> row(kM + 1);
    for (int i = 0; i <= kM; ++i) {
      row[i] = sum;
      sum += t;
      t *= ratio(l++);
    }
    for (int level = kM; level > 0; --level) {
      for (int i = 0; i < level; ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
    }
    return row[0];
  }
  int small = 0;
  constexpr long kMaxTerms = 1000000;
  for (; l < kMaxTerms; ++l) {
    sum += t;
    if (t == 0.0) return sum;
    if (std::abs(t) < tol * std::abs(sum)) {
      if (++small >= 3) return sum;
    } else {
      small = 0;
    }
    t *= ratio(l);
    if (!std::isfinite(t)) throw SeriesError("pfq: terms overflow", sum, l);
  }
  throw SeriesError("pfq: no convergence", sum, kMaxTerms);
}

double gauss_2f1_neg1(double a, double b, double c) {
  if (a == 0.0 || b == 0.0) return 1.0;
  numerics::QuadConfig qc;
  qc.rel_tol = 1e-13;
  qc.abs_tol = 0.0;
  if (!(c > b && b > 0) && c > a && a > 0) std::swap(a, b);
  if (c > b && b > 0) {
    return numerics::beta_expect(b, c - b, [a](double r) { return std::pow(1.0 + r, -a); }, qc);
  }
  try {
    return pfq(PfqParams{{a, b}, {c}, -1.0});
  } catch (const SeriesError&) {
    throw DomainError("gauss_2f1_neg1: parameters admit neither the Euler integral nor the series");
  }
}

double kummer_u(double a, double b, double z) {
  if (!(z > 0)) throw DomainError("kummer_u: z must be positive");
  if (a == 0.0) return 1.0;
  if (a < 0) {
    if (1.0 + a - b > 0) return std::pow(z, 1.0 - b) * kummer_u(1.0 + a - b, 2.0 - b, z);
    throw DomainError("kummer_u: a <= 0 not reachable by the recurrence");
  }
  const double lga = std::lgamma(a);
  numerics::QuadConfig qc;
  qc.rel_tol = 1e-13;
  qc.abs_tol = 0.0;
  // [0,1] with t = s^{1/a} absorbing t^{a-1}.
  const double inv_a = 1.0 / a;
  numerics::Integrand head = [=](double s) {
    const double t = std::pow(s, inv_a);
    return std::exp((b - a - 1.0) * std::log1p(t) - z * t - lga);
  };
  numerics::Integrand tail = [=](double t) {
    return std::exp((a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t) - z * t - lga);
  };
  const double i1 = inv_a * numerics::quad_finite(head, 0.0, 1.0, qc);
  const double i2 = numerics::quad_tail(tail, 1.0, qc.with_scale(std::max(1.0, a / z)));
  return i1 + i2;
}

double hermite_h(double nu, double lambda) {
  if (!(lambda > 0)) throw DomainError("hermite_h: lambda must be positive");
  return std::pow(2.0, 0.5 * nu) * kummer_u(-0.5 * nu, 0.5, 0.5 * lambda * lambda);
}

double mittag_leffler(StabilityIndex alpha, double lambda, const numerics::QuadConfig& cfg) {
  if (lambda < 0 || !std::isfinite(lambda)) throw DomainError("mittag_leffler: lambda must be >= 0");
  if (lambda == 0.0) return 1.0;
  const double a = alpha.value();
  const double sa = std::sin(kPi * a) / kPi, ca = std::cos(kPi * a);
  const double c = std::pow(lambda, 1.0 / a);
  auto dens = [=](double y) {
    const double ya = std::pow(y, a);
    return sa * std::pow(y, a - 1.0) / (ya * ya + 2.0 * ya * ca + 1.0);
  };
  numerics::Integrand f = [=](double y) { return std::exp(-c * y) * dens(y); };
  const double split = c > 1.0 ? 1.0 / c : 1.0;
  numerics::QuadConfig qc = cfg;
  qc.abs_tol = std::min(cfg.abs_tol, 1e-16);
  const double head = numerics::quad_finite(f, 0.0, split, qc.with_hints(a - 1.0, std::nullopt));
  const double tail = numerics::quad_tail(f, split, qc.without_hints().with_scale(std::max(split, 1.0 / c)));
  return head + tail;
}

double mittag_leffler_series(StabilityIndex alpha, double lambda) {
  if (lambda < 0 || !std::isfinite(lambda)) throw DomainError("mittag_leffler_series: lambda must be >= 0");
  if (lambda == 0.0) return 1.0;
  return mp_ml_sum(alpha, 0, lambda);
}

double gen_mittag_leffler(StabilityIndex alpha, int k, double lambda) {
  if (k < 1) throw DomainError("gen_mittag_leffler: k must be >= 1");
  if (lambda < 0 || !std::isfinite(lambda)) throw DomainError("gen_mittag_leffler: lambda must be >= 0");
  if (lambda == 0.0) return 1.0;
  const double a = alpha.value();
  const double lg0 = std::lgamma(1.0 + k * a);
  const double lk = std::lgamma(k + 1.0);
  double sum = 0.0, biggest = 0.0, prev = 0.0;
  int small = 0;
  for (long l = 0; l < 100000; ++l) {
    const double lt = l * std::log(lambda) + std::lgamma(k + l + 1.0) - lk - std::lgamma(l + 1.0) +
                      lg0 - std::lgamma(1.0 + (k + l) * a);
    const double t = (l % 2 == 0 ? 1.0 : -1.0) * std::exp(lt);
    sum += t;
    biggest = std::max(biggest, std::abs(t));
    if (l > 0 && std::abs(t) < 1e-17 * std::abs(sum) && std::abs(t) < prev) {
      if (++small >= 3) break;
    } else {
      small = 0;
    }
    prev = std::abs(t);
  }
  // Too much cancellation for double: redo in MPFR.
  if (biggest > 1e6 * std::abs(sum)) return std::exp(lg0) * mp_ml_sum(alpha, k, lambda);
  return sum;
}

double bessel_i(double nu, double z) {
  if (!(z > 0)) throw DomainError("bessel_i: z must be positive");
  if (nu == std::floor(nu) && nu < 0) nu = -nu;
  if (nu > -1) return std::exp(log_bessel_i_positive(nu, z));
  // nu < -1, non-integer: plain series, moderate z only.
  const double h = 0.5 * z;
  double sum = 0.0;
  for (int m = 0; m < 500; ++m) {
    const double t = std::pow(h, 2.0 * m + nu) / (std::tgamma(m + 1.0) * std::tgamma(m + nu + 1.0));
    sum += t;
    if (m > -nu && std::abs(t) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_i_scaled(double nu, double z) {
  if (!(z > 0)) throw DomainError("bessel_i: z must be positive");
  if (nu == std::floor(nu) && nu < 0) nu = -nu;
  if (nu > -1) return std::exp(log_bessel_i_positive(nu, z) - z);
  return bessel_i(nu, z) * std::exp(-z);
}

double bessel_k_scaled(double eta, double z) {
  if (!(z > 0)) throw DomainError("bessel_k: z must be positive");
  eta = std::abs(eta);
  // Trapezoid rule on e^{-z(cosh t - 1)} cosh(eta t); the integrand is analytic
  // in a strip and decays double exponentially, so the rule converges geometrically.
  constexpr double h = 0.1;
  auto f = [=](double t) {
    const double sh = std::sinh(0.5 * t);
    return std::exp(-2.0 * z * sh * sh) * std::cosh(eta * t);
  };
  double sum = 0.5 * f(0.0);
  for (int i = 1; i < 100000; ++i) {
    const double t = i * h;
    const double v = f(t);
    sum += v;
    const double sh = std::sinh(0.5 * t);
    if (v < 1e-18 * sum && 2.0 * z * sh * sh > eta * t + 1.0) break;
  }
  return h * sum;
}

double bessel_k(double eta, double z) { return bessel_k_scaled(eta, z) * std::exp(-z); }

}  // namespace stablepk::specfun
