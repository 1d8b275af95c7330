#pragma once

#include <functional>

#include "stablepk/core.hpp"
#include "stablepk/numerics.hpp"

namespace stablepk::stable {

using numerics::McConfig;
using numerics::McEstimate;
using numerics::QuadConfig;
using numerics::Rng;

// Kanter's function. The bracket carries exponent +1/(1-alpha); see README.
double kanter_fn(StabilityIndex alpha, double u);
double kanter_limit_at_zero(StabilityIndex alpha);

// Density of S_alpha (Laplace transform e^{-lambda^alpha}). Uses the closed
// form at alpha = 1/2 and the Kanter integral otherwise.
double pdf(StabilityIndex alpha, double t, const QuadConfig& cfg = {});
double pdf_kanter(StabilityIndex alpha, double t, const QuadConfig& cfg = {});
double pdf_half(double t);

double sample(StabilityIndex alpha, Rng& rng);
// S_{1/2} = 1 / (4 G_{1/2}).
double sample_half(Rng& rng);

// E[S_alpha^{-delta}] = Gamma(delta/alpha + 1) / Gamma(delta + 1), delta > -alpha.
double negative_moment(StabilityIndex alpha, double delta);

class TiltedStable {
 public:
  TiltedStable(StabilityIndex alpha, double theta);
  const StabilityIndex& alpha() const { return alpha_; }
  double theta() const { return theta_; }
  // E[S_{alpha,theta}^{-delta}].
  double negative_moment(double delta) const;

 private:
  StabilityIndex alpha_;
  double theta_;
};

double tilted_pdf(const TiltedStable& ts, double t, const QuadConfig& cfg = {});

struct TiltedEstimate : McEstimate {
  double normalizer_mc = 0.0;
  double normalizer_exact = 0.0;
  double normalizer_std_error = 0.0;
  double ess = 0.0;
};

// E[g(S_{alpha,theta})] by self-normalized importance sampling with weight S^{-theta}.
TiltedEstimate tilted_expect(const TiltedStable& ts, const std::function<double(double)>& g,
                             const McConfig& cfg = {});
// Variant whose integrand draws further variables from the same stream.
TiltedEstimate tilted_expect(const TiltedStable& ts, const std::function<double(double, Rng&)>& g,
                             const McConfig& cfg = {});

}  // namespace stablepk::stable
