#include "stablepk/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stablepk/betagamma.hpp"
#include "stablepk/excursion.hpp"
#include "stablepk/lamperti.hpp"
#include "stablepk/model_spec.hpp"
#include "stablepk/specfun.hpp"
#include "stablepk/stable.hpp"

namespace stablepk::gibbs {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_nk(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw DomainError("need 1 <= k <= n");
}

}  // namespace

int Composition::n() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

void Composition::validate() const {
  if (sizes.empty()) throw DomainError("composition is empty");
  for (int s : sizes) {
    if (s < 1) throw DomainError("composition sizes must be >= 1");
  }
}

int SetPartition::n() const {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.size());
  return n;
}

std::vector<int> SetPartition::rgs() const {
  std::vector<int> out(n(), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int e : blocks[b]) out[e - 1] = static_cast<int>(b);
  }
  return out;
}

Composition SetPartition::composition() const {
  Composition c;
  for (const auto& b : blocks) c.sizes.push_back(static_cast<int>(b.size()));
  return c;
}

void SetPartition::validate() const {
  const int total = n();
  std::vector<int> seen(total + 1, 0);
  for (const auto& b : blocks) {
    if (b.empty()) throw DomainError("set partition has an empty block");
    for (int e : b) {
      if (e < 1 || e > total || seen[e]++) throw DomainError("set partition blocks must cover 1..n disjointly");
    }
  }
}

SetPartition SetPartition::from_rgs(const std::vector<int>& rgs) {
  SetPartition p;
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    const int b = rgs[i];
    if (b < 0 || b > static_cast<int>(p.blocks.size())) throw DomainError("not a restricted growth string");
    if (b == static_cast<int>(p.blocks.size())) p.blocks.emplace_back();
    p.blocks[b].push_back(static_cast<int>(i) + 1);
  }
  return p;
}

void for_each_set_partition(int n, const std::function<void(const std::vector<int>&)>& f) {
  if (n < 1) throw DomainError("set partitions need n >= 1");
  std::vector<int> a(n, 0);
  std::vector<int> mx(n, 0);  // mx[i] = max(a[0..i-1])
  while (true) {
    f(a);
    int i = n - 1;
    while (i > 0 && a[i] > mx[i]) --i;
    if (i == 0) return;
    ++a[i];
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      mx[j] = std::max(mx[j - 1], a[j - 1]);
    }
  }
}

long bell_number(int n) {
  std::vector<long> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<long> next{row.back()};
    for (long x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

std::vector<std::vector<double>> forward_recursion(StabilityIndex alpha, const std::vector<double>& column) {
  const int N = static_cast<int>(column.size());
  const double a = alpha.value();
  std::vector<std::vector<double>> t(N);
  for (int n = 1; n <= N; ++n) {
    t[n - 1].assign(n, 0.0);
    t[n - 1][0] = column[n - 1];
  }
  for (int n = 1; n < N; ++n) {
    for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] - (n - k * a) * t[n][k - 1];
  }
  return t;
}

double backward_residual(StabilityIndex alpha, const std::vector<std::vector<double>>& t, int n, int k) {
  if (n + 1 > static_cast<int>(t.size())) throw DomainError("backward_residual: row n+1 missing");
  check_nk(n, k);
  return t[n - 1][k - 1] - (n - k * alpha.value()) * t[n][k - 1] - t[n][k];
}

double cond_g_half_closed(int n, int k, double t) {
  check_nk(n, k);
  if (!(t > 0)) throw DomainError("cond_g: t must be positive");
  return std::pow(2.0, 1 - k) * std::pow(t, 0.5 * (1 - k)) * specfun::kummer_u(n - 0.5 * (k + 1), 0.5, 0.25 / t);
}

double cond_g_half_hermite(int n, int k, double lambda) {
  check_nk(n, k);
  if (!(lambda > 0)) throw DomainError("cond_g: lambda must be positive");
  return std::pow(2.0, n - k) * std::pow(lambda, k - 1) * specfun::hermite_h(k + 1 - 2 * n, lambda);
}

double cond_g_quadrature(StabilityIndex alpha, int n, int k, double t, const QuadConfig& cfg) {
  check_nk(n, k);
  if (!(t > 0)) throw DomainError("cond_g: t must be positive");
  const double a = alpha.value();
  const QuadConfig inner = alpha.is_half() ? cfg : cfg.nested();
  const QuadConfig outer = alpha.is_half() ? cfg : cfg.nested();
  const double ft = stable::pdf(alpha, t, inner);
  const double integral = numerics::beta_integral(
      0.0, n - k * a - 1.0, [&](double u) { return u > 0 ? stable::pdf(alpha, t * u, inner) : 0.0; }, outer);
  return std::exp(k * std::log(a) - k * a * std::log(t) - std::lgamma(n - k * a)) * integral / ft;
}

double cond_g(StabilityIndex alpha, int n, int k, double t, const QuadConfig& cfg) {
  if (alpha.is_half()) return cond_g_half_closed(n, k, t);
  return cond_g_quadrature(alpha, n, k, t, cfg);
}

double cond_eppf(StabilityIndex alpha, const Composition& comp, double t, const QuadConfig& cfg) {
  comp.validate();
  double w = 1.0;
  for (int s : comp.sizes) w *= specfun::rising(1.0 - alpha.value(), s - 1);
  return cond_g(alpha, comp.n(), comp.k(), t, cfg) * w;
}

double pd_v(StabilityIndex alpha, double theta, int n, int k) {
  check_nk(n, k);
  const double a = alpha.value();
  if (!(theta > -a)) throw DomainError("pd: theta must exceed -alpha");
  double num = 1.0;
  for (int i = 1; i < k; ++i) num *= theta + i * a;
  return num / specfun::rising(theta + 1.0, n - 1);
}

GenericH exptilt_h(StabilityIndex alpha, double b) {
  if (!(b > 0)) throw DomainError("exptilt: b must be positive");
  const double c = std::pow(b, alpha.value());
  return GenericH{[b, c](double t) { return std::exp(c - b * t); }, 1.0, "exptilt"};
}

GenericH modified_bessel_h(double eta, const QuadConfig& cfg) {
  if (!std::isfinite(eta)) throw DomainError("modbessel: eta must be finite");
  const double z = numerics::quad_halfline(
      [eta](double t) { return t > 0 ? specfun::bessel_k(eta, std::sqrt(t)) * stable::pdf_half(t) : 0.0; },
      cfg.without_hints());
  return GenericH{[eta](double t) { return specfun::bessel_k(eta, std::sqrt(t)); }, z, "modbessel"};
}

McEstimate generic_vn1(StabilityIndex alpha, const GenericH& h, int n, const McConfig& cfg) {
  if (n < 1) throw DomainError("need n >= 1");
  McEstimate out;
  out.n_samples = cfg.n_samples;
  if (n == 1) {
    out.mean = 1.0;
    return out;
  }
  const double gn = std::tgamma(n);
  auto bm = numerics::run_batches(2, cfg, [&](Rng& rng, double* o) {
    const double s = stable::sample(alpha, rng);
    const double b = numerics::sample_beta(1.0, n - 1.0, rng);
    o[0] = h.h(s / b);
    o[1] = h.normalizer ? 0.0 : h.h(s);
  });
  if (h.normalizer) {
    const double z = *h.normalizer * gn;
    return numerics::reduce(bm, [z](const double* m) { return m[0] / z; });
  }
  return numerics::reduce(bm, [gn](const double* m) { return m[0] / (gn * m[1]); });
}

McEstimate generic_vnk(StabilityIndex alpha, const GenericH& h, int n, int k, const McConfig& cfg) {
  check_nk(n, k);
  McEstimate out;
  out.n_samples = cfg.n_samples;
  if (n == 1) {
    out.mean = 1.0;
    return out;
  }
  const double a = alpha.value();
  const double pre = std::exp((k - 1) * std::log(a) + std::lgamma(k) - std::lgamma(n));
  const stable::TiltedStable ts(alpha, k * a);
  const auto est = stable::tilted_expect(
      ts,
      std::function<double(double, Rng&)>([&](double s, Rng& rng) {
        const double b = numerics::sample_beta(k * a, n - k * a, rng);
        return h.h(s / b);
      }),
      cfg);
  out.warning = est.warning;
  if (h.normalizer) {
    out.mean = pre * est.mean / *h.normalizer;
    out.std_error = pre * est.std_error / *h.normalizer;
    return out;
  }
  const auto norm = numerics::mc_mean([&](Rng& rng) { return h.h(stable::sample(alpha, rng)); },
                                      cfg.with_seed(numerics::splitmix64(cfg.seed + 1)));
  out.mean = pre * est.mean / norm.mean;
  out.std_error = std::abs(out.mean) * std::hypot(est.std_error / est.mean, norm.std_error / norm.mean);
  return out;
}

void validate_model(StabilityIndex alpha, const MixingModel& model) {
  const double a = alpha.value();
  std::visit(Overloaded{
                 [](const PointMass& m) {
                   if (!(m.t > 0)) throw DomainError("pointmass: t must be positive");
                 },
                 [a](const PoissonDirichlet& m) {
                   if (!(m.theta > -a)) throw DomainError("pd: theta must exceed -alpha");
                 },
                 [](const ExpTilt& m) {
                   if (!(m.b > 0)) throw DomainError("exptilt: b must be positive");
                 },
                 [](const GenericHModel& m) {
                   if (!m.h.h) throw DomainError("generic h: function is empty");
                 },
                 [a](const LampertiCond& m) {
                   if (!(m.theta > -a)) throw DomainError("lampcond: theta must exceed -alpha");
                 },
                 [](const LampertiClass& m) {
                   if (!m.g.f) throw DomainError("lampclass: g is empty");
                 },
                 [](const MittagLefflerTilt& m) {
                   if (!(m.lambda > 0)) throw DomainError("mltilt: lambda must be positive");
                 },
                 [a](const BetaGamma& m) {
                   if (!(m.theta > -a)) throw DomainError("betagamma: theta must exceed -alpha");
                   if (!m.g.f) throw DomainError("betagamma: g is empty");
                 },
                 [a](const HermiteType& m) {
                   if (!(m.theta > -a)) throw DomainError("hermitetype: theta must exceed -alpha");
                   if (!(m.lambda > 0)) throw DomainError("hermitetype: lambda must be positive");
                 },
                 [](const Kolmogorov& m) {
                   if (!(m.tau > 0)) throw DomainError("kolmogorov: tau must be positive");
                 },
                 [](const BesselBridge& m) {
                   if (!(m.delta > 0 && m.delta < 1)) throw DomainError("besselbridge: delta must lie in (0,1)");
                   if (!(m.w > 0)) throw DomainError("besselbridge: w must be positive");
                   if (m.j < 1) throw DomainError("besselbridge: j must be >= 1");
                 },
                 [&alpha](const ModifiedBessel& m) {
                   if (!alpha.is_half()) throw DomainError("modbessel: only alpha = 1/2 is supported");
                   if (!std::isfinite(m.eta)) throw DomainError("modbessel: eta must be finite");
                 },
             },
             model);
}

bool is_mc_model(const MixingModel& model) {
  return std::holds_alternative<ExpTilt>(model) || std::holds_alternative<GenericHModel>(model) ||
         std::holds_alternative<ModifiedBessel>(model);
}

namespace {

GenericH model_h(StabilityIndex alpha, const MixingModel& model, const QuadConfig& qcfg) {
  if (const auto* m = std::get_if<ExpTilt>(&model)) return exptilt_h(alpha, m->b);
  if (const auto* m = std::get_if<ModifiedBessel>(&model)) return modified_bessel_h(m->eta, qcfg);
  return std::get<GenericHModel>(model).h;
}

excursion::BesselBridgeModel bessel_model(StabilityIndex alpha, const BesselBridge& m) {
  return {alpha, m.delta, m.w, m.j};
}

betagamma::BetaGammaSpec bg_spec(StabilityIndex alpha, const BetaGamma& m) { return {alpha, m.theta, m.g.f}; }

// V_{n,1} for deterministic models.
double column_value(StabilityIndex alpha, const MixingModel& model, int n, const QuadConfig& q) {
  if (n == 1) return 1.0;
  return std::visit(
      Overloaded{
          [&](const PointMass& m) { return cond_g(alpha, n, 1, m.t, q); },
          [&](const PoissonDirichlet& m) { return pd_v(alpha, m.theta, n, 1); },
          [&](const LampertiCond& m) { return lamperti::lamperti_cond_v(alpha, m.theta, n, 1, q); },
          [&](const LampertiClass& m) { return lamperti::lamperti_class_vn1(alpha, n, m.g.f, q); },
          [&](const MittagLefflerTilt& m) { return lamperti::ml_class_vn1(alpha, m.lambda, n, q); },
          [&](const BetaGamma& m) { return betagamma::bg_v(bg_spec(alpha, m), n, 1, q).value; },
          [&](const HermiteType& m) { return betagamma::hermite_type_v(alpha, m.theta, m.lambda, n, 1, q).value; },
          [&](const Kolmogorov& m) { return excursion::kolmogorov_vn1(alpha, m.tau, n, q); },
          [&](const BesselBridge& m) { return excursion::bessel_bridge_vn1(bessel_model(alpha, m), n, q); },
          [&](const auto&) -> double { throw Error("column_value: Monte Carlo model"); },
      },
      model);
}

// Relative accuracy attributed to a deterministic column entry.
double column_rel_error(StabilityIndex alpha, const MixingModel& model) {
  return std::visit(Overloaded{
                        [&](const PointMass&) { return alpha.is_half() ? 1e-12 : 1e-7; },
                        [](const PoissonDirichlet&) { return 1e-15; },
                        [](const LampertiClass&) { return 1e-7; },
                        [](const MittagLefflerTilt&) { return 1e-7; },
                        [](const BetaGamma&) { return 1e-7; },
                        [](const auto&) { return 1e-9; },
                    },
                    model);
}

McConfig cell_config(const McConfig& mc, int n, int k) {
  return mc.with_seed(numerics::splitmix64(mc.seed ^ (static_cast<std::uint64_t>(n) * 1000u + k)));
}

}  // namespace

std::optional<EppfValue> direct_v(StabilityIndex alpha, const MixingModel& model, int n, int k,
                                  const QuadConfig& q, const McConfig& mc) {
  check_nk(n, k);
  auto det = [](double v, Method m) {
    EppfValue e;
    e.value = v;
    e.method = m;
    return std::optional<EppfValue>(e);
  };
  if (n == 1) return det(1.0, Method::closed_form);
  return std::visit(
      Overloaded{
          [&](const PointMass& m) {
            return det(cond_g(alpha, n, k, m.t, q), alpha.is_half() ? Method::closed_form : Method::quadrature);
          },
          [&](const PoissonDirichlet& m) { return det(pd_v(alpha, m.theta, n, k), Method::closed_form); },
          [&](const LampertiCond& m) {
            return det(lamperti::lamperti_cond_v(alpha, m.theta, n, k, q), Method::quadrature);
          },
          [&](const LampertiClass& m) {
            return det(lamperti::lamperti_class_zeta_v(alpha, n, k, m.g.f, q), Method::quadrature);
          },
          [&](const MittagLefflerTilt& m) {
            return det(lamperti::ml_class_vnk_direct(alpha, m.lambda, n, k, q), Method::quadrature);
          },
          [&](const BetaGamma& m) { return std::optional<EppfValue>(betagamma::bg_v(bg_spec(alpha, m), n, k, q)); },
          [&](const HermiteType& m) {
            return std::optional<EppfValue>(betagamma::hermite_type_v(alpha, m.theta, m.lambda, n, k, q));
          },
          [&](const Kolmogorov& m) {
            auto e = excursion::kolmogorov_v(alpha, m.tau, n, k, q, cell_config(mc, n, k));
            e.check.reset();
            return std::optional<EppfValue>(e);
          },
          [&](const BesselBridge&) { return std::optional<EppfValue>(); },
          [&](const auto&) {
            const auto est = generic_vnk(alpha, model_h(alpha, model, q), n, k, cell_config(mc, n, k));
            EppfValue e;
            e.value = est.mean;
            e.std_error = est.std_error;
            e.method = Method::mc_direct;
            return std::optional<EppfValue>(e);
          },
      },
      model);
}

void VTable::resize(int n) {
  N = n;
  v.assign(n, {});
  sigma.assign(n, {});
  method.assign(n, {});
  flagged.assign(n, {});
  for (int i = 1; i <= n; ++i) {
    v[i - 1].assign(i, 0.0);
    sigma[i - 1].assign(i, 0.0);
    method[i - 1].assign(i, Method::closed_form);
    flagged[i - 1].assign(i, false);
  }
}

VTable build_vtable(StabilityIndex alpha, const MixingModel& model, int N, const BuildConfig& cfg) {
  if (N < 1) throw DomainError("build_vtable: N must be >= 1");
  validate_model(alpha, model);
  cfg.quad.validate();
  cfg.mc.validate();
  VTable vt;
  vt.alpha = alpha;
  vt.model = describe_model(model);
  vt.seed = cfg.mc.seed;
  vt.resize(N);
  const double a = alpha.value();

  // Error scale used for the cancellation alarm, per cell.
  std::vector<std::vector<double>> bound(N);
  for (int n = 1; n <= N; ++n) bound[n - 1].assign(n, 0.0);

  if (is_mc_model(model)) {
    const GenericH h = model_h(alpha, model, cfg.quad);
    const bool exact = h.normalizer.has_value();
    const int dim = std::max(1, N - 1 + (exact ? 0 : 1));
    auto bm = numerics::run_batches(dim, cfg.mc, [&](Rng& rng, double* o) {
      const double s = stable::sample(alpha, rng);
      for (int m = 2; m <= N; ++m) o[m - 2] = h.h(s / numerics::sample_beta(1.0, m - 1.0, rng));
      if (!exact) o[dim - 1] = h.h(s);
      if (N == 1 && exact) o[0] = 0.0;
    });
    const double z = exact ? *h.normalizer : 0.0;
    auto stat = [&](const double* m) {
      std::vector<double> column(N, 1.0);
      const double norm = exact ? z : m[dim - 1];
      for (int i = 2; i <= N; ++i) column[i - 1] = m[i - 2] / (std::tgamma(i) * norm);
      const auto t = forward_recursion(alpha, column);
      std::vector<double> flat;
      for (const auto& row : t) flat.insert(flat.end(), row.begin(), row.end());
      return flat;
    };
    const auto ests = numerics::reduce_vector(bm, stat);
    std::size_t idx = 0;
    for (int n = 1; n <= N; ++n) {
      for (int k = 1; k <= n; ++k, ++idx) {
        vt.v[n - 1][k - 1] = ests[idx].mean;
        vt.sigma[n - 1][k - 1] = ests[idx].std_error;
        vt.method[n - 1][k - 1] = n == 1 ? Method::closed_form : Method::mc_recursion;
        bound[n - 1][k - 1] = ests[idx].std_error;
      }
    }
  } else {
    std::vector<double> column(N);
    for (int n = 1; n <= N; ++n) column[n - 1] = column_value(alpha, model, n, cfg.quad);
    const auto t = forward_recursion(alpha, column);
    const double rel = column_rel_error(alpha, model);
    const Method m = std::holds_alternative<PoissonDirichlet>(model) ? Method::closed_form : Method::quadrature;
    for (int n = 1; n <= N; ++n) {
      vt.v[n - 1] = t[n - 1];
      bound[n - 1][0] = n == 1 ? 0.0 : rel * std::abs(column[n - 1]);
      for (int k = 1; k <= n; ++k) vt.method[n - 1][k - 1] = n == 1 ? Method::closed_form : m;
    }
    for (int n = 1; n < N; ++n) {
      for (int k = 1; k <= n; ++k) {
        bound[n][k] = bound[n - 1][k - 1] + (n - k * a) * bound[n][k - 1];
      }
    }
  }

  for (int n = 2; n <= N; ++n) {
    for (int k = 1; k <= n; ++k) {
      const bool alarm = vt.v[n - 1][k - 1] < 10.0 * bound[n - 1][k - 1];
      if (!cfg.prefer_direct && !alarm) continue;
      std::optional<EppfValue> d;
      if (cfg.prefer_direct || cfg.fallback) d = direct_v(alpha, model, n, k, cfg.quad, cfg.mc);
      if (d) {
        vt.v[n - 1][k - 1] = d->value;
        vt.sigma[n - 1][k - 1] = d->std_error;
        vt.method[n - 1][k - 1] = d->method;
        vt.flagged[n - 1][k - 1] = d->value < 3.0 * d->std_error;
      } else if (alarm) {
        vt.flagged[n - 1][k - 1] = true;
      }
    }
  }
  certify(vt, cfg.enumeration_cap);
  return vt;
}

EppfValue eppf(const VTable& vt, const Composition& comp) {
  comp.validate();
  const int n = comp.n();
  if (n > vt.N) throw DomainError("eppf: composition larger than the table");
  double w = 1.0;
  for (int s : comp.sizes) w *= specfun::rising(1.0 - vt.alpha.value(), s - 1);
  EppfValue out;
  out.value = vt.at(n, comp.k()) * w;
  out.std_error = vt.err(n, comp.k()) * w;
  out.method = vt.method[n - 1][comp.k() - 1];
  out.flagged = vt.flagged[n - 1][comp.k() - 1];
  return out;
}

EnumerationReport enumerate_check(const VTable& vt, int n) {
  if (n < 1 || n > vt.N) throw DomainError("enumerate_check: n outside the table");
  if (n > 10) throw DomainError("enumerate_check: n above the enumeration cap of 10");
  const double a = vt.alpha.value();
  std::vector<double> w(n + 1);
  for (int m = 1; m <= n; ++m) w[m] = specfun::rising(1.0 - a, m - 1);
  // Weight of each block count, so the error of the sum can be formed per cell.
  std::vector<double> per_k(n + 1, 0.0);
  std::vector<int> sizes(n);
  EnumerationReport r;
  r.n = n;
  for_each_set_partition(n, [&](const std::vector<int>& rgs) {
    std::fill(sizes.begin(), sizes.end(), 0);
    int k = 0;
    for (int b : rgs) {
      ++sizes[b];
      k = std::max(k, b + 1);
    }
    double prod = 1.0;
    for (int b = 0; b < k; ++b) prod *= w[sizes[b]];
    per_k[k] += prod;
    ++r.partitions;
  });
  double var = 0.0;
  for (int k = 1; k <= n; ++k) {
    r.sum += per_k[k] * vt.at(n, k);
    var += std::pow(per_k[k] * vt.err(n, k), 2);
  }
  r.sum_std_error = std::sqrt(var);
  r.abs_error = std::abs(r.sum - 1.0);
  r.min_margin = 1.0;
  for (int m = 1; m <= n; ++m) {
    for (int k = 1; k <= m; ++k) {
      const double v = vt.at(m, k);
      r.min_margin = std::min(r.min_margin, v != 0.0 ? (v - 3.0 * vt.err(m, k)) / std::abs(v) : -1.0);
      if (m < n) {
        r.worst_residual =
            std::max(r.worst_residual, std::abs(backward_residual(vt.alpha, vt.v, m, k)) / std::abs(v));
      }
    }
  }
  return r;
}

void certify(VTable& vt, int enumeration_cap) {
  Certification c;
  const double a = vt.alpha.value();
  c.v11_ok = std::abs(vt.at(1, 1) - 1.0) <= 1e-12;
  c.min_margin = 1.0;
  for (int n = 1; n <= vt.N; ++n) {
    for (int k = 1; k <= n; ++k) {
      const double v = vt.at(n, k);
      const double s = vt.err(n, k);
      if (!(v + 3.0 * s > 0)) ++c.positivity_failures;
      c.min_margin = std::min(c.min_margin, v != 0.0 ? (v - 3.0 * s) / std::abs(v) : -1.0);
      if (vt.flagged[n - 1][k - 1]) c.flagged.emplace_back(n, k);
      if (n < vt.N) {
        const double c1 = n - k * a;
        const double r = std::abs(backward_residual(vt.alpha, vt.v, n, k));
        const double tol =
            3.0 * std::sqrt(s * s + std::pow(c1 * vt.err(n + 1, k), 2) + std::pow(vt.err(n + 1, k + 1), 2)) +
            1e-7 * (std::abs(v) + std::abs(c1 * vt.at(n + 1, k)) + std::abs(vt.at(n + 1, k + 1))) + 1e-300;
        c.worst_residual = std::max(c.worst_residual, r / tol);
      }
    }
  }
  const int m = std::min(vt.N, std::min(enumeration_cap, 10));
  bool sum_ok = true;
  if (m >= 1) {
    const auto rep = enumerate_check(vt, m);
    c.enumerated_n = m;
    c.sum_minus_one = rep.sum - 1.0;
    c.sum_tolerance = 3.0 * rep.sum_std_error + 1e-7;
    sum_ok = std::abs(c.sum_minus_one) <= c.sum_tolerance;
  }
  c.passed = c.v11_ok && c.worst_residual <= 1.0 && c.positivity_failures == 0 && sum_ok;
  vt.cert = std::move(c);
}

std::vector<double> step_probabilities(const VTable& vt, const std::vector<int>& block_sizes) {
  const int n = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
  const int k = static_cast<int>(block_sizes.size());
  if (n < 1 || n + 1 > vt.N) throw DomainError("step_probabilities: table too small");
  const double a = vt.alpha.value();
  const double base = vt.at(n, k);
  const double ratio = vt.at(n + 1, k) / base;
  std::vector<double> p;
  p.reserve(k + 1);
  for (int s : block_sizes) p.push_back(ratio * (s - a));
  p.push_back(vt.at(n + 1, k + 1) / base);
  return p;
}

SetPartition sample_partition(const VTable& vt, int n, Rng& rng) {
  if (n < 1 || n > vt.N) throw DomainError("sample_partition: n outside the table");
  SetPartition part;
  part.blocks.push_back({1});
  std::vector<int> sizes{1};
  for (int m = 1; m < n; ++m) {
    const auto p = step_probabilities(vt, sizes);
    const int k = static_cast<int>(sizes.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < 0) {
        const int cell_k = static_cast<int>(i) == k ? k + 1 : k;
        throw CancellationError("sample_partition: negative probability from V[" + std::to_string(m + 1) + "][" +
                                    std::to_string(cell_k) + "]",
                                m + 1, cell_k);
      }
      total += p[i];
    }
    const double u = numerics::sample_uniform(rng) * total;
    double acc = 0.0;
    std::size_t choice = p.size() - 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) {
        choice = i;
        break;
      }
    }
    if (static_cast<int>(choice) == k) {
      part.blocks.push_back({m + 1});
      sizes.push_back(1);
    } else {
      part.blocks[choice].push_back(m + 1);
      ++sizes[choice];
    }
  }
  return part;
}

}  // namespace stablepk::gibbs
