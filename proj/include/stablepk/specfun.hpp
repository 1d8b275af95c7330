#pragma once

#include <vector>

#include "stablepk/core.hpp"
#include "stablepk/numerics.hpp"

namespace stablepk::specfun {

double ln_gamma(double x);
// Gamma(a + n) / Gamma(a), computed in log space with sign tracking.
double rising(double a, int n);
// Gamma(a) / Gamma(b) via log-gamma differences.
double gamma_ratio(double a, double b);

struct PfqParams {
  std::vector<double> a;
  std::vector<double> b;
  double z = 0.0;
  void validate() const;
};

double pfq(const PfqParams& params, double tol = 1e-16);

// 2F1(a, b; c; -1) by the Euler integral, with the series as fallback.
double gauss_2f1_neg1(double a, double b, double c);

// Confluent hypergeometric function of the second kind.
double kummer_u(double a, double b, double z);

// Hermite function h_nu(lambda) = 2^{nu/2} U(-nu/2, 1/2, lambda^2/2).
double hermite_h(double nu, double lambda);

// E_{alpha,1}(-lambda) from the Lamperti-density integral.
double mittag_leffler(StabilityIndex alpha, double lambda, const numerics::QuadConfig& cfg = {});
// Same function from its power series, summed in MPFR with enough bits to
// absorb the cancellation between terms.
double mittag_leffler_series(StabilityIndex alpha, double lambda);

// Normalized generalized Mittag-Leffler function, equal to 1 at lambda = 0.
double gen_mittag_leffler(StabilityIndex alpha, int k, double lambda);

double bessel_i(double nu, double z);
double bessel_k(double eta, double z);
// e^{-z} I_nu(z) and e^{z} K_eta(z).
double bessel_i_scaled(double nu, double z);
double bessel_k_scaled(double eta, double z);

}  // namespace stablepk::specfun
