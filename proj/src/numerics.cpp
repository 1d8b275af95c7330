#include "stablepk/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "stablepk/core.hpp"

namespace stablepk::numerics {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
using G10 = boost::math::quadrature::gauss<double, 10>;

struct Panel {
  double a, b, value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// Evaluates f, treating non-finite values at points that rounded onto an
// endpoint as zero; anything else non-finite is an error.
class Guarded {
 public:
  Guarded(const Integrand& f, double lo, double hi) : f_(f), lo_(lo), hi_(hi) {}
  double operator()(double x) {
    ++evals;
    const double y = f_(x);
    if (std::isfinite(y)) return y;
    const double slack = 64 * std::numeric_limits<double>::epsilon();
    if (x <= lo_ + slack * std::max(1.0, std::abs(lo_)) ||
        x >= hi_ - slack * std::max(1.0, std::abs(hi_))) {
      return 0.0;
    }
    throw QuadratureError("integrand not finite", std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::infinity(), x);
  }
  int evals = 0;

 private:
  const Integrand& f_;
  double lo_, hi_;
};

Panel gk21(Guarded& f, double a, double b) {
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G10::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double kron = f0 * wk[0];
  double gauss = 0.0;
  double l1 = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double fp = f(c + h * xk[i]);
    const double fm = f(c - h * xk[i]);
    kron += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
  }
  Panel p{a, b, kron * h, std::abs((kron - gauss) * h), l1 * std::abs(h)};
  p.error = std::max(p.error, 2 * std::numeric_limits<double>::epsilon() * std::abs(p.value));
  return p;
}

QuadResult adaptive(const Integrand& g, double a, double b, const QuadConfig& cfg) {
  Guarded f(g, a, b);
  std::priority_queue<Panel> heap;
  Panel first = gk21(f, a, b);
  double total = first.value, err = first.error, l1 = first.l1;
  heap.push(first);
  int splits = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  auto target = [&] {
    return std::max({cfg.abs_tol, cfg.rel_tol * std::abs(total), 50 * eps * l1});
  };
  while (err > target()) {
    if (splits >= cfg.max_subdivisions) {
      throw QuadratureError("quadrature did not converge after " +
                                std::to_string(cfg.max_subdivisions) + " subdivisions",
                            total, err);
    }
    Panel p = heap.top();
    const double mid = 0.5 * (p.a + p.b);
    heap.pop();
    if (!(mid > p.a && mid < p.b)) {
      // Panel at machine resolution; accept its contribution as is.
      err -= p.error;
      p.error = 0.0;
      heap.push(p);
      ++splits;
      continue;
    }
    Panel left = gk21(f, p.a, mid);
    Panel right = gk21(f, mid, p.b);
    total += left.value + right.value - p.value;
    err += left.error + right.error - p.error;
    l1 += left.l1 + right.l1 - p.l1;
    heap.push(left);
    heap.push(right);
    ++splits;
    if (err < 0 || splits % 64 == 0) {
      // Re-sum to shed accumulated rounding in the running totals.
      std::priority_queue<Panel> copy = heap;
      total = err = l1 = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        l1 += copy.top().l1;
        copy.pop();
      }
    }
  }
  std::priority_queue<Panel> copy = heap;
  double sum = 0.0, esum = 0.0;
  std::vector<double> parts;
  while (!copy.empty()) {
    parts.push_back(copy.top().value);
    esum += copy.top().error;
    copy.pop();
  }
  std::sort(parts.begin(), parts.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  for (double v : parts) sum += v;
  return QuadResult{sum, esum, splits, f.evals};
}

}  // namespace

QuadConfig QuadConfig::with_hints(std::optional<double> lower, std::optional<double> upper) const {
  QuadConfig c = *this;
  c.lower_hint = lower;
  c.upper_hint = upper;
  return c;
}

QuadConfig QuadConfig::with_scale(double s) const {
  QuadConfig c = *this;
  c.scale = s;
  return c;
}

QuadConfig QuadConfig::nested() const {
  QuadConfig c = *this;
  c.rel_tol = std::max(c.rel_tol, 1e-8);
  c.abs_tol = std::max(c.abs_tol, 1e-13);
  return c;
}

void QuadConfig::validate() const {
  if (abs_tol < 0 || rel_tol < 0 || (abs_tol == 0 && rel_tol == 0)) {
    throw DomainError("QuadConfig: need a positive abs_tol or rel_tol");
  }
  if (max_subdivisions < 1) throw DomainError("QuadConfig: max_subdivisions must be >= 1");
  if ((lower_hint && *lower_hint <= -1) || (upper_hint && *upper_hint <= -1)) {
    throw DomainError("QuadConfig: singularity hints must exceed -1");
  }
  if (!(scale > 0)) throw DomainError("QuadConfig: scale must be positive");
}

QuadResult quad_finite_detail(const Integrand& f, double a, double b, const QuadConfig& cfg) {
  cfg.validate();
  if (!(a < b)) throw DomainError("quad_finite: need a < b");
  const bool lo = cfg.lower_hint && *cfg.lower_hint < 0;
  const bool hi = cfg.upper_hint && *cfg.upper_hint < 0;
  if (!lo && !hi) return adaptive(f, a, b, cfg);

  // Power substitution x - a = L s^q with q = 1/(1+p) makes the hinted end bounded.
  const double m = (lo && hi) ? 0.5 * (a + b) : (lo ? b : a);
  QuadResult out;
  auto add = [&](const QuadResult& r) {
    out.value += r.value;
    out.error += r.error;
    out.subdivisions += r.subdivisions;
    out.evaluations += r.evaluations;
  };
  QuadConfig sub = cfg;
  if (lo && hi) sub.abs_tol = 0.5 * cfg.abs_tol;
  if (lo) {
    const double q = 1.0 / (1.0 + *cfg.lower_hint);
    const double len = m - a;
    Integrand g = [&f, a, len, q](double s) {
      if (s <= 0) return 0.0;
      const double x = a + len * std::pow(s, q);
      return f(x) * len * q * std::pow(s, q - 1);
    };
    add(adaptive(g, 0.0, 1.0, sub));
  }
  if (hi) {
    const double q = 1.0 / (1.0 + *cfg.upper_hint);
    const double len = b - m;
    Integrand g = [&f, b, len, q](double s) {
      if (s <= 0) return 0.0;
      const double x = b - len * std::pow(s, q);
      return f(x) * len * q * std::pow(s, q - 1);
    };
    add(adaptive(g, 0.0, 1.0, sub));
  }
  if (!lo) add(adaptive(f, a, m, sub));
  if (!hi) add(adaptive(f, m, b, sub));
  return out;
}

double quad_finite(const Integrand& f, double a, double b, const QuadConfig& cfg) {
  return quad_finite_detail(f, a, b, cfg).value;
}

double quad_tail(const Integrand& f, double a, const QuadConfig& cfg) {
  cfg.validate();
  const double c = cfg.scale;
  // Tail probe: t*f(t) must shrink between two far-out points.
  const double t1 = a + c * 1e4, t2 = a + c * 1e8;
  const double p1 = std::abs(t1 * f(t1)), p2 = std::abs(t2 * f(t2));
  if (p2 > 0 && p2 >= p1) {
    throw QuadratureError("integrand tail does not decay", std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::infinity(), t2);
  }
  Integrand g = [&f, a, c](double s) {
    if (s >= 1.0) return 0.0;
    const double u = 1.0 - s;
    const double t = a + c * s / u;
    const double v = f(t);
    if (v == 0.0) return 0.0;
    return v * c / (u * u);
  };
  QuadConfig sub = cfg;
  sub.upper_hint.reset();
  return quad_finite(g, 0.0, 1.0, sub);
}

double quad_halfline(const Integrand& f, const QuadConfig& cfg) { return quad_tail(f, 0.0, cfg); }

double beta_integral(double p, double q, const Integrand& g, const QuadConfig& cfg) {
  if (!(p > -1) || !(q > -1)) throw DomainError("beta_integral: exponents must exceed -1");
  QuadConfig sub = cfg.without_hints();
  sub.abs_tol = 0.5 * cfg.abs_tol;
  // Lower half: x = s^{1/(p+1)}/2 absorbs x^p.
  const double ap = 1.0 / (p + 1.0);
  Integrand lower = [&g, ap, q](double s) {
    const double x = 0.5 * std::pow(s, ap);
    return std::pow(1.0 - x, q) * g(x);
  };
  // Upper half: 1 - x = s^{1/(q+1)}/2 absorbs (1-x)^q.
  const double aq = 1.0 / (q + 1.0);
  Integrand upper = [&g, aq, p](double s) {
    const double x = 1.0 - 0.5 * std::pow(s, aq);
    return std::pow(x, p) * g(x);
  };
  const double lo = std::pow(0.5, p + 1.0) / (p + 1.0) * quad_finite(lower, 0.0, 1.0, sub);
  const double hi = std::pow(0.5, q + 1.0) / (q + 1.0) * quad_finite(upper, 0.0, 1.0, sub);
  return lo + hi;
}

double beta_expect(double a, double b, const Integrand& g, const QuadConfig& cfg) {
  if (!(a > 0) || !(b > 0)) throw DomainError("beta_expect: shapes must be positive");
  return beta_integral(a - 1.0, b - 1.0, g, cfg) / boost::math::beta(a, b);
}

double gamma_expect(double c, const Integrand& g, const QuadConfig& cfg) {
  if (!(c > 0)) throw DomainError("gamma_expect: shape must be positive");
  const double lg = std::lgamma(c);
  Integrand dens = [&g, c, lg](double x) {
    if (x <= 0) return 0.0;
    const double w = std::exp((c - 1.0) * std::log(x) - x - lg);
    return w == 0.0 ? 0.0 : w * g(x);
  };
  const double split = std::max(c, 1.0);
  QuadConfig head = cfg.with_hints(c - 1.0, std::nullopt);
  head.abs_tol = 0.5 * cfg.abs_tol;
  QuadConfig tail = cfg.without_hints().with_scale(std::max(1.0, std::sqrt(c)));
  tail.abs_tol = 0.5 * cfg.abs_tol;
  return quad_finite(dens, 0.0, split, head) + quad_tail(dens, split, tail);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::substream(std::uint64_t index) const {
  return Rng(splitmix64(seed_ ^ splitmix64(index + 0x5851f42d4c957f2dULL)));
}

double sample_uniform(Rng& rng) {
  return (static_cast<double>(rng.next() >> 11) + 0.5) * 0x1.0p-53;
}

double sample_exponential(Rng& rng) { return -std::log(sample_uniform(rng)); }

double sample_normal(Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  return d(rng.engine());
}

double sample_gamma(double shape, Rng& rng) {
  if (!(shape > 0) || !std::isfinite(shape)) throw DomainError("sample_gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost: G_a = G_{a+1} U^{1/a}, done in log space so tiny shapes do not underflow early.
    std::gamma_distribution<double> d(shape + 1.0, 1.0);
    const double g = d(rng.engine());
    return std::exp(std::log(g) + std::log(sample_uniform(rng)) / shape);
  }
  std::gamma_distribution<double> d(shape, 1.0);
  return d(rng.engine());
}

double sample_beta(double a, double b, Rng& rng) {
  if (!(a > 0) || !(b > 0)) throw DomainError("sample_beta: shapes must be positive");
  for (;;) {
    const double x = sample_gamma(a, rng);
    const double y = sample_gamma(b, rng);
    const double s = x + y;
    if (s > 0) return x / s;
  }
}

std::vector<double> sample_dirichlet(int dim, Rng& rng) {
  if (dim < 1) throw DomainError("sample_dirichlet: dim must be >= 1");
  std::vector<double> e(dim);
  double s = 0.0;
  for (auto& v : e) {
    v = sample_exponential(rng);
    s += v;
  }
  for (auto& v : e) v /= s;
  return e;
}

std::size_t default_mc_samples() {
  if (const char* env = std::getenv(kSamplesEnvVar)) {
    char* end = nullptr;
    const long long n = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return 1000000;
}

McConfig McConfig::with_seed(std::uint64_t s) const {
  McConfig c = *this;
  c.seed = s;
  return c;
}

McConfig McConfig::with_samples(std::size_t n) const {
  McConfig c = *this;
  c.n_samples = n;
  return c;
}

std::size_t McConfig::batch_size() const { return n_samples / static_cast<std::size_t>(n_batches); }

void McConfig::validate() const {
  if (n_batches < 2) throw DomainError("McConfig: need at least 2 batches");
  if (n_samples < 2) throw DomainError("McConfig: need at least 2 samples");
  if (batch_size() < 1) throw DomainError("McConfig: fewer samples than batches");
}

std::vector<double> BatchMeans::overall() const {
  std::vector<double> m(dim_, 0.0);
  for (int b = 0; b < n_batches_; ++b) {
    const double* x = batch(b);
    for (int d = 0; d < dim_; ++d) m[d] += x[d];
  }
  for (auto& v : m) v /= n_batches_;
  return m;
}

std::vector<McEstimate> reduce_vector(const BatchMeans& bm,
                                      const std::function<std::vector<double>(const double*)>& stat) {
  const std::vector<double> all = bm.overall();
  const std::vector<double> point = stat(all.data());
  const std::size_t m = point.size();
  std::vector<std::vector<double>> per(bm.n_batches());
  for (int b = 0; b < bm.n_batches(); ++b) per[b] = stat(bm.batch(b));
  std::vector<McEstimate> out(m);
  const double nb = bm.n_batches();
  for (std::size_t i = 0; i < m; ++i) {
    double mean = 0.0;
    for (int b = 0; b < bm.n_batches(); ++b) mean += per[b][i];
    mean /= nb;
    double ss = 0.0;
    for (int b = 0; b < bm.n_batches(); ++b) ss += (per[b][i] - mean) * (per[b][i] - mean);
    out[i].mean = point[i];
    out[i].std_error = std::sqrt(ss / (nb - 1) / nb);
    out[i].n_samples = bm.total_samples();
  }
  return out;
}

McEstimate reduce(const BatchMeans& bm, const Statistic& stat) {
  return reduce_vector(bm, [&stat](const double* m) { return std::vector<double>{stat(m)}; })[0];
}

McEstimate mc_mean(const std::function<double(Rng&)>& sampler, const McConfig& cfg) {
  auto bm = run_batches(1, cfg, [&sampler](Rng& rng, double* out) { out[0] = sampler(rng); });
  return reduce(bm, [](const double* m) { return m[0]; });
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

bool ks_passes_1pct(double d, double n_eff) { return std::sqrt(n_eff) * d < kKsCritical1pct; }

double chi_square_quantile(double df, double p) {
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(df), p);
}

}  // namespace stablepk::numerics
