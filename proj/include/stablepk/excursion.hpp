#pragma once

#include <functional>
#include <vector>

#include "stablepk/core.hpp"
#include "stablepk/numerics.hpp"

namespace stablepk::excursion {

using numerics::McConfig;
using numerics::McEstimate;
using numerics::QuadConfig;
using numerics::Rng;

// P(max |Brownian bridge| <= x).
double kolmogorov_cdf(double x);
double kolmogorov_pdf(double x);
// Inverse-cdf draw of the Brownian-bridge maximum.
double mbr_sample(Rng& rng);
double mbr_quantile(double u);

// P(2 G_{k-1/2} M^2 <= beta^{-alpha}_{alpha/2,n-alpha} tau) by Monte Carlo.
McEstimate p_nk(StabilityIndex alpha, double tau, int n, int k, const McConfig& cfg = {});
// E[tanh(sqrt(tau) beta^{-alpha/2}_{alpha/2,n-alpha})] by quadrature, equal to p_{n,1}.
double tanh_expect(StabilityIndex alpha, double tau, int n, const QuadConfig& cfg = {});

double kolmogorov_vn1(StabilityIndex alpha, double tau, int n, const QuadConfig& cfg = {});
// Direct value from p_{n,k}; the check is the forward recursion over the quadrature column.
EppfValue kolmogorov_v(StabilityIndex alpha, double tau, int n, int k, const QuadConfig& qcfg = {},
                       const McConfig& mcfg = {});

// I_{-delta}(x) / I_delta(x).
double h_minus_delta(double delta, double x);
// P_delta(sqrt(2 G_delta) M_1 >= x) = 1 - I_delta(x) / I_{-delta}(x), clipped to [0, 1].
double bessel_tail(double delta, double x);

struct BesselBridgeModel {
  StabilityIndex alpha;
  double delta;
  double w;
  int j;
  void validate() const;
};

double bessel_bridge_vn1(const BesselBridgeModel& m, int n, const QuadConfig& cfg = {});
// Row n: V_{n,1} from quadrature, the rest through the forward recursion.
std::vector<EppfValue> bessel_bridge_v(const BesselBridgeModel& m, int n, const QuadConfig& cfg = {});
// Largest amount removed by clipping over a grid of arguments >= w.
double bessel_bridge_clipped_mass(const BesselBridgeModel& m);

struct GenericMu {
  StabilityIndex alpha;
  double delta;
  double kappa;
  int j;
  std::function<double(double)> mu;
  double w;
  void validate() const;
};

double generic_mu_vn1(const GenericMu& m, int n, const QuadConfig& cfg = {});
std::vector<EppfValue> generic_mu_v(const GenericMu& m, int n, const QuadConfig& cfg = {});

}  // namespace stablepk::excursion
