#pragma once

#include <functional>

#include "stablepk/core.hpp"
#include "stablepk/numerics.hpp"

namespace stablepk::lamperti {

using numerics::McConfig;
using numerics::QuadConfig;

// Law of X_alpha = S_alpha / S'_alpha.
double x_pdf(StabilityIndex alpha, double y);
double x_cdf(StabilityIndex alpha, double y);
// The same cdf written with the principal inverse cotangent on (0, pi).
double x_cdf_acot(StabilityIndex alpha, double y);

double delta_theta(StabilityIndex alpha, double theta, double x);

struct LampertiKernelArgs {
  StabilityIndex alpha;
  int n;
  int k;
  int j;
  void validate() const;
};

double vartheta(const LampertiKernelArgs& args, double x);
// sin(pi m / 2) for integer m, exactly.
int sin_half_pi(int m);

// Normalizing constant of the mixing density C t^{1-theta} f(t)^2.
double lamperti_normalizer(StabilityIndex alpha, double theta, const QuadConfig& cfg = {});
// 1 / \int t^{1-theta} f(t)^2 dt with f from the Kanter integral (slow, independent).
double lamperti_normalizer_direct(StabilityIndex alpha, double theta, const QuadConfig& cfg = {});
// Density of X_{alpha,theta} at 1 via the Kanter density.
double x_theta_pdf_at_one(StabilityIndex alpha, double theta, const QuadConfig& cfg = {});

// V_{n,k} for the law of S_{alpha,theta} given X_{alpha,theta} = 1.
double lamperti_cond_v(StabilityIndex alpha, double theta, int n, int k, const QuadConfig& cfg = {});
// theta = 0 through the vartheta expansion.
double lamperti_cond_v_expanded(StabilityIndex alpha, int n, int k, const QuadConfig& cfg = {});
// theta = 0, k = 1 single-integral form.
double lamperti_cond_v_first(StabilityIndex alpha, int n, const QuadConfig& cfg = {});
// alpha = 1/2 closed form through 2F1(.;.;.;-1).
double lamperti_cond_v_half_2f1(double theta, int n, int k);

double psi(const LampertiKernelArgs& args, double w, const QuadConfig& cfg = {});
double zeta(const LampertiKernelArgs& args, const std::function<double(double)>& g,
            const QuadConfig& cfg = {});
// Density of X_{alpha,k alpha} beta_{k alpha, n - k alpha} at w.
double psi_density(StabilityIndex alpha, int n, int k, double w, const QuadConfig& cfg = {});

// 1 / E[g(X_alpha)].
double lamperti_class_normalizer(StabilityIndex alpha, const std::function<double(double)>& g,
                                 const QuadConfig& cfg = {});
// Zeta-sum value with a Dirichlet-mixture Monte Carlo check attached.
EppfValue lamperti_class_v(StabilityIndex alpha, int n, int k, const std::function<double(double)>& g,
                           const QuadConfig& qcfg = {}, const McConfig& mcfg = {});
// Zeta-sum value only.
double lamperti_class_zeta_v(StabilityIndex alpha, int n, int k, const std::function<double(double)>& g,
                             const QuadConfig& cfg = {});
// V_{n,1} = L E[g(X_alpha beta_{1,n-1})] / Gamma(n) by quadrature.
double lamperti_class_vn1(StabilityIndex alpha, int n, const std::function<double(double)>& g,
                          const QuadConfig& cfg = {});

// Mittag-Leffler tilt gamma(t) proportional to e^{-lambda t^{-alpha}} f(t).
double ml_class_vn1(StabilityIndex alpha, double lambda, int n, const QuadConfig& cfg = {});
double ml_class_vnk_direct(StabilityIndex alpha, double lambda, int n, int k, const QuadConfig& cfg = {});
EppfValue ml_class_v(StabilityIndex alpha, double lambda, int n, int k, const QuadConfig& cfg = {});

}  // namespace stablepk::lamperti
