#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stablepk/core.hpp"
#include "stablepk/numerics.hpp"

namespace stablepk::gibbs {

using numerics::McConfig;
using numerics::McEstimate;
using numerics::QuadConfig;
using numerics::Rng;

struct Composition {
  std::vector<int> sizes;
  int n() const;
  int k() const { return static_cast<int>(sizes.size()); }
  void validate() const;
};

struct SetPartition {
  // Blocks in creation order, each listing its elements (1-based) increasingly.
  std::vector<std::vector<int>> blocks;
  int n() const;
  // Restricted growth string: entry i is the block label (0-based) of element i+1.
  std::vector<int> rgs() const;
  Composition composition() const;
  void validate() const;
  static SetPartition from_rgs(const std::vector<int>& rgs);
};

// Calls f on every restricted growth string of length n.
void for_each_set_partition(int n, const std::function<void(const std::vector<int>&)>& f);
long bell_number(int n);

// table[n-1][k-1] = V_{n,k} for n = 1..column.size(), from column[n-1] = V_{n,1}
// and V_{n+1,k+1} = V_{n,k} - (n - k alpha) V_{n+1,k}.
std::vector<std::vector<double>> forward_recursion(StabilityIndex alpha, const std::vector<double>& column);
// V_{n,k} - (n - k alpha) V_{n+1,k} - V_{n+1,k+1}.
double backward_residual(StabilityIndex alpha, const std::vector<std::vector<double>>& table, int n, int k);

// Conditional Gibbs coefficient; the closed form at alpha = 1/2, quadrature otherwise.
double cond_g(StabilityIndex alpha, int n, int k, double t, const QuadConfig& cfg = {});
// Always the integral form, with stable::pdf for the density.
double cond_g_quadrature(StabilityIndex alpha, int n, int k, double t, const QuadConfig& cfg = {});
// 2^{1-k} t^{(1-k)/2} U(n - (k+1)/2, 1/2, 1/(4t)).
double cond_g_half_closed(int n, int k, double t);
// 2^{n-k} lambda^{k-1} h_{k+1-2n}(lambda), equal to cond_g_half_closed at t = lambda^{-2}/2.
double cond_g_half_hermite(int n, int k, double lambda);
double cond_eppf(StabilityIndex alpha, const Composition& comp, double t, const QuadConfig& cfg = {});

// Poisson-Dirichlet weights prod_{i=1}^{k-1}(theta + i alpha) / [theta+1]_{n-1}.
double pd_v(StabilityIndex alpha, double theta, int n, int k);

// Mixing density gamma(t) = h(t) f_alpha(t). Without a normalizer the engine
// estimates E[h(S_alpha)] from the same draws and divides by it.
struct GenericH {
  std::function<double(double)> h;
  std::optional<double> normalizer;
  std::string name = "custom";
};

// h(t) = exp(b^alpha - b t), normalized exactly.
GenericH exptilt_h(StabilityIndex alpha, double b);
// h(t) proportional to K_eta(sqrt(t)), normalized by quadrature against f_{1/2}.
GenericH modified_bessel_h(double eta, const QuadConfig& cfg = {});

McEstimate generic_vn1(StabilityIndex alpha, const GenericH& h, int n, const McConfig& cfg = {});
McEstimate generic_vnk(StabilityIndex alpha, const GenericH& h, int n, int k, const McConfig& cfg = {});

struct NamedFunction {
  std::string name;
  std::function<double(double)> f;
};

struct PointMass { double t; };
struct PoissonDirichlet { double theta; };
struct ExpTilt { double b; };
struct GenericHModel { GenericH h; };
struct LampertiCond { double theta; };
struct LampertiClass { NamedFunction g; };
struct MittagLefflerTilt { double lambda; };
struct BetaGamma { double theta; NamedFunction g; };
struct HermiteType { double theta; double lambda; };
struct Kolmogorov { double tau; };
struct BesselBridge { double delta; double w; int j; };
struct ModifiedBessel { double eta; };

using MixingModel = std::variant<PointMass, PoissonDirichlet, ExpTilt, GenericHModel, LampertiCond, LampertiClass,
                                 MittagLefflerTilt, BetaGamma, HermiteType, Kolmogorov, BesselBridge,
                                 ModifiedBessel>;

void validate_model(StabilityIndex alpha, const MixingModel& model);
// True when the first column comes from Monte Carlo.
bool is_mc_model(const MixingModel& model);
// Direct V_{n,k} for one cell, when the model has such a route.
std::optional<EppfValue> direct_v(StabilityIndex alpha, const MixingModel& model, int n, int k,
                                  const QuadConfig& qcfg, const McConfig& mcfg);

struct BuildConfig {
  QuadConfig quad;
  McConfig mc;
  // Fill every cell by its direct route where one exists, instead of the recursion.
  bool prefer_direct = false;
  // Replace cancellation-flagged cells by direct estimates.
  bool fallback = true;
  int enumeration_cap = 10;
};

struct Certification {
  bool v11_ok = false;
  double worst_residual = 0.0;  // largest |residual| / tolerance over checked cells
  int positivity_failures = 0;
  double min_margin = 0.0;  // min over cells of (v - 3 sigma) / v
  std::optional<int> enumerated_n;
  double sum_minus_one = 0.0;
  double sum_tolerance = 0.0;
  std::vector<std::pair<int, int>> flagged;
  bool passed = false;
};

struct VTable {
  StabilityIndex alpha{0.5};
  std::string model;
  int N = 0;
  std::uint64_t seed = numerics::kDefaultSeed;
  std::vector<std::vector<double>> v;
  std::vector<std::vector<double>> sigma;
  std::vector<std::vector<Method>> method;
  std::vector<std::vector<bool>> flagged;
  Certification cert;

  double at(int n, int k) const { return v[n - 1][k - 1]; }
  double err(int n, int k) const { return sigma[n - 1][k - 1]; }
  void resize(int n);
};

VTable build_vtable(StabilityIndex alpha, const MixingModel& model, int N, const BuildConfig& cfg = {});
// Recomputes the certification block in place.
void certify(VTable& vt, int enumeration_cap = 10);

EppfValue eppf(const VTable& vt, const Composition& comp);

// Unnormalized step probabilities for adding element n+1 to a partition of [n]:
// one entry per existing block, then the new-block entry.
std::vector<double> step_probabilities(const VTable& vt, const std::vector<int>& block_sizes);
SetPartition sample_partition(const VTable& vt, int n, Rng& rng);

struct EnumerationReport {
  int n = 0;
  long partitions = 0;
  double sum = 0.0;
  double sum_std_error = 0.0;
  double abs_error = 0.0;
  double worst_residual = 0.0;
  double min_margin = 0.0;
};

EnumerationReport enumerate_check(const VTable& vt, int n);

}  // namespace stablepk::gibbs
