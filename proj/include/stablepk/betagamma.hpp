#pragma once

#include <functional>
#include <utility>

#include "stablepk/core.hpp"
#include "stablepk/numerics.hpp"

namespace stablepk::betagamma {

using numerics::McConfig;
using numerics::QuadConfig;

struct BetaGammaSpec {
  StabilityIndex alpha;
  double theta;
  std::function<double(double)> g;
  void validate() const;
};

// (E[(G_{(theta+alpha)/alpha}^{1/alpha})^s], E[(G_{theta+1} / S_{alpha,theta})^s]),
// each side from its own gamma-ratio moments.
std::pair<double, double> mellin_identity_check(StabilityIndex alpha, double theta, double s);

// 1 / Sigma = E[g(G_{theta/alpha+1} beta^alpha_{theta+alpha,1-alpha})].
double bg_inverse_normalizer(const BetaGammaSpec& spec, const QuadConfig& cfg = {});

// V_{n,k} by nested quadrature over the beta and gamma densities.
EppfValue bg_v(const BetaGammaSpec& spec, int n, int k, const QuadConfig& cfg);
// Same by Monte Carlo; the normalizer shares the draws.
EppfValue bg_v(const BetaGammaSpec& spec, int n, int k, const McConfig& cfg);

// Un-normalized integral \int_0^1 (1+lambda u^alpha)^{-(theta/alpha+k)} u^{theta+alpha-1}(1-u)^{n-alpha-1} du.
double hermite_type_integral(StabilityIndex alpha, double theta, double lambda, int n, int k,
                             const QuadConfig& cfg = {});
EppfValue hermite_type_v(StabilityIndex alpha, double theta, double lambda, int n, int k,
                         const QuadConfig& cfg = {});

}  // namespace stablepk::betagamma
