#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace stablepk::numerics {

using Integrand = std::function<double(double)>;

struct QuadConfig {
  double abs_tol = 1e-14;
  double rel_tol = 1e-10;
  int max_subdivisions = 400;
  // Integrand behaves like (x - a)^p near a hinted endpoint, p > -1.
  std::optional<double> lower_hint;
  std::optional<double> upper_hint;
  // Length scale of the compactifying map t = scale * s / (1 - s) on half-lines.
  double scale = 1.0;

  QuadConfig with_hints(std::optional<double> lower, std::optional<double> upper) const;
  QuadConfig with_scale(double s) const;
  QuadConfig without_hints() const { return with_hints(std::nullopt, std::nullopt); }
  // Looser tolerance for integrands that themselves call quadrature.
  QuadConfig nested() const;
  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
};

QuadResult quad_finite_detail(const Integrand& f, double a, double b, const QuadConfig& cfg = {});
double quad_finite(const Integrand& f, double a, double b, const QuadConfig& cfg = {});
// Integral over (a, infinity); lower_hint refers to the endpoint a.
double quad_tail(const Integrand& f, double a, const QuadConfig& cfg = {});
double quad_halfline(const Integrand& f, const QuadConfig& cfg = {});

// \int_0^1 x^p (1-x)^q g(x) dx with p, q > -1. The power factors are absorbed
// exactly by substitutions on each half of the interval.
double beta_integral(double p, double q, const Integrand& g, const QuadConfig& cfg = {});
// E[g(B)] for B ~ Beta(a, b).
double beta_expect(double a, double b, const Integrand& g, const QuadConfig& cfg = {});
// E[g(G)] for G ~ Gamma(c, 1).
double gamma_expect(double c, const Integrand& g, const QuadConfig& cfg = {});

// Splittable deterministic stream: mt19937_64 seeded through splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng substream(std::uint64_t index) const;
  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return engine_; }
  std::uint64_t next() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

double sample_uniform(Rng& rng);  // open interval (0, 1)
double sample_exponential(Rng& rng);
double sample_normal(Rng& rng);
double sample_gamma(double shape, Rng& rng);
double sample_beta(double a, double b, Rng& rng);
std::vector<double> sample_dirichlet(int dim, Rng& rng);

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr const char* kSamplesEnvVar = "STABLEPK_MC_SAMPLES";

// 1e6 unless STABLEPK_MC_SAMPLES holds a positive integer.
std::size_t default_mc_samples();

struct McConfig {
  std::size_t n_samples = default_mc_samples();
  std::uint64_t seed = kDefaultSeed;
  int n_batches = 32;

  McConfig with_seed(std::uint64_t s) const;
  McConfig with_samples(std::size_t n) const;
  std::size_t batch_size() const;
  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::string warning;
};

// Per-batch means of a vector of draws, the raw material for batch-means errors.
class BatchMeans {
 public:
  BatchMeans(int n_batches, int dim, std::size_t per_batch)
      : n_batches_(n_batches), dim_(dim), per_batch_(per_batch),
        sums_(static_cast<std::size_t>(n_batches) * dim, 0.0) {}

  int n_batches() const { return n_batches_; }
  int dim() const { return dim_; }
  std::size_t per_batch() const { return per_batch_; }
  std::size_t total_samples() const { return per_batch_ * n_batches_; }
  double* batch(int b) { return sums_.data() + static_cast<std::size_t>(b) * dim_; }
  const double* batch(int b) const { return sums_.data() + static_cast<std::size_t>(b) * dim_; }
  std::vector<double> overall() const;

 private:
  int n_batches_;
  int dim_;
  std::size_t per_batch_;
  std::vector<double> sums_;
};

// draw(rng, out) writes dim values. Batch b uses Rng(cfg.seed).substream(b).
template <class Draw>
BatchMeans run_batches(int dim, const McConfig& cfg, Draw&& draw) {
  cfg.validate();
  const std::size_t per = cfg.batch_size();
  BatchMeans bm(cfg.n_batches, dim, per);
  std::vector<double> buf(dim);
  const Rng base(cfg.seed);
  for (int b = 0; b < cfg.n_batches; ++b) {
    Rng rng = base.substream(static_cast<std::uint64_t>(b));
    double* acc = bm.batch(b);
    for (std::size_t i = 0; i < per; ++i) {
      draw(rng, buf.data());
      for (int d = 0; d < dim; ++d) acc[d] += buf[d];
    }
    for (int d = 0; d < dim; ++d) acc[d] /= static_cast<double>(per);
  }
  return bm;
}

using Statistic = std::function<double(const double* means)>;
// Point estimate from the pooled means, standard error from the batch spread.
McEstimate reduce(const BatchMeans& bm, const Statistic& stat);
// Same for vector-valued statistics (e.g. a recursion applied per batch).
std::vector<McEstimate> reduce_vector(
    const BatchMeans& bm, const std::function<std::vector<double>(const double*)>& stat);

McEstimate mc_mean(const std::function<double(Rng&)>& sampler, const McConfig& cfg = {});

// Kolmogorov-Smirnov helpers used by tests and the validation suite.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> x, std::vector<double> y);
// Asymptotic 1% critical value of sqrt(n_eff) * D.
inline constexpr double kKsCritical1pct = 1.62762;
bool ks_passes_1pct(double d, double n_eff);

double chi_square_quantile(double df, double p);

}  // namespace stablepk::numerics
