#include "stablepk/stable.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/sin_pi.hpp>

namespace stablepk::stable {

namespace {

double sinpi(double x) { return boost::math::sin_pi(x); }

}  // namespace

double kanter_limit_at_zero(StabilityIndex alpha) {
  const double a = alpha.value();
  return std::pow(a, 1.0 / (1.0 - a)) * (1.0 - a) / a;
}

double kanter_fn(StabilityIndex alpha, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("kanter_fn: u must lie in [0,1]");
  const double a = alpha.value();
  if (u == 0.0) return kanter_limit_at_zero(alpha);
  if (u == 1.0) return std::numeric_limits<double>::infinity();
  const double sa = sinpi(a * u);
  return std::pow(sa / sinpi(u), 1.0 / (1.0 - a)) * sinpi((1.0 - a) * u) / sa;
}

double pdf_half(double t) {
  if (!(t > 0)) throw DomainError("pdf_half: t must be positive");
  constexpr double two_sqrt_pi = 3.5449077018110320546;
  return std::exp(-0.25 / t) / (two_sqrt_pi * t * std::sqrt(t));
}

double pdf_kanter(StabilityIndex alpha, double t, const QuadConfig& cfg) {
  alpha.check_moderate();
  if (!(t > 0)) throw DomainError("pdf: t must be positive");
  const double a = alpha.value();
  const double c = std::pow(t, -a / (1.0 - a));
  numerics::Integrand f = [&alpha, c](double u) {
    const double k = kanter_fn(alpha, u);
    const double x = c * k;
    if (!(x < 745.0)) return 0.0;
    return std::exp(-x) * k;
  };
  const double integral = numerics::quad_finite(f, 0.0, 1.0, cfg.without_hints());
  return a / (1.0 - a) * std::pow(t, -1.0 / (1.0 - a)) * integral;
}

double pdf(StabilityIndex alpha, double t, const QuadConfig& cfg) {
  if (alpha.is_half()) {
    if (!(t > 0)) throw DomainError("pdf: t must be positive");
    return pdf_half(t);
  }
  return pdf_kanter(alpha, t, cfg);
}

double sample(StabilityIndex alpha, Rng& rng) {
  alpha.check_moderate();
  const double a = alpha.value();
  const double u = numerics::sample_uniform(rng);
  const double e = numerics::sample_exponential(rng);
  return std::pow(kanter_fn(alpha, u) / e, (1.0 - a) / a);
}

double sample_half(Rng& rng) { return 0.25 / numerics::sample_gamma(0.5, rng); }

double negative_moment(StabilityIndex alpha, double delta) {
  const double a = alpha.value();
  if (!(delta > -a)) throw DomainError("negative_moment: need delta > -alpha");
  return std::exp(std::lgamma(delta / a + 1.0) - std::lgamma(delta + 1.0));
}

TiltedStable::TiltedStable(StabilityIndex alpha, double theta) : alpha_(alpha), theta_(theta) {
  if (!(theta > -alpha.value()) || !std::isfinite(theta)) {
    throw DomainError("TiltedStable: theta must exceed -alpha");
  }
}

double TiltedStable::negative_moment(double delta) const {
  return stable::negative_moment(alpha_, theta_ + delta) / stable::negative_moment(alpha_, theta_);
}

double tilted_pdf(const TiltedStable& ts, double t, const QuadConfig& cfg) {
  return std::pow(t, -ts.theta()) * pdf(ts.alpha(), t, cfg) / negative_moment(ts.alpha(), ts.theta());
}

namespace {

template <class G>
TiltedEstimate tilted_impl(const TiltedStable& ts, G&& g, const McConfig& cfg) {
  const StabilityIndex alpha = ts.alpha();
  const double theta = ts.theta();
  auto bm = numerics::run_batches(3, cfg, [&](Rng& rng, double* out) {
    const double s = sample(alpha, rng);
    const double w = theta == 0.0 ? 1.0 : std::pow(s, -theta);
    out[0] = w * g(s, rng);
    out[1] = w;
    out[2] = w * w;
  });
  TiltedEstimate est;
  static_cast<McEstimate&>(est) = numerics::reduce(bm, [](const double* m) { return m[0] / m[1]; });
  const auto norm = numerics::reduce(bm, [](const double* m) { return m[1]; });
  est.normalizer_mc = norm.mean;
  est.normalizer_std_error = norm.std_error;
  est.normalizer_exact = negative_moment(alpha, theta);
  const auto all = bm.overall();
  est.ess = static_cast<double>(bm.total_samples()) * all[1] * all[1] / all[2];
  if (est.ess < 0.01 * static_cast<double>(bm.total_samples())) {
    est.warning = "effective sample size below 1% of draws";
  }
  return est;
}

}  // namespace

TiltedEstimate tilted_expect(const TiltedStable& ts, const std::function<double(double)>& g,
                             const McConfig& cfg) {
  return tilted_impl(ts, [&g](double s, Rng&) { return g(s); }, cfg);
}

TiltedEstimate tilted_expect(const TiltedStable& ts, const std::function<double(double, Rng&)>& g,
                             const McConfig& cfg) {
  return tilted_impl(ts, g, cfg);
}

}  // namespace stablepk::stable
