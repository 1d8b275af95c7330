#include "stablepk/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "stablepk/betagamma.hpp"
#include "stablepk/excursion.hpp"
#include "stablepk/gibbs.hpp"
#include "stablepk/lamperti.hpp"
#include "stablepk/specfun.hpp"
#include "stablepk/stable.hpp"
#include "stablepk/vtable_io.hpp"

namespace stablepk::validation {

namespace {

using numerics::McConfig;
using numerics::Rng;

class Tracker {
 public:
  void check(const std::string& label, double deviation, double tolerance) {
    ++checks_;
    double r = deviation / tolerance;
    if (tolerance <= 0) r = deviation == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
    if (r > 1.0) ok_ = false;
    if (r >= worst_) {
      worst_ = r;
      worst_case_ = label;
    }
  }
  void fail(const std::string& label) { check(label, 1.0, 0.0); }

  CriterionResult result(int id, std::string name) const {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.passed = ok_ && checks_ > 0;
    r.worst_ratio = worst_;
    r.worst_case = worst_case_;
    r.checks = checks_;
    return r;
  }

 private:
  bool ok_ = true;
  int checks_ = 0;
  double worst_ = 0.0;
  std::string worst_case_;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

McConfig mc_for(const SuiteConfig& cfg, int id, std::uint64_t sub, std::size_t samples) {
  McConfig m;
  m.n_samples = samples;
  m.seed = numerics::splitmix64(cfg.seed ^ (static_cast<std::uint64_t>(id) << 40) ^ numerics::splitmix64(sub));
  return m;
}

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

CriterionResult c1(const SuiteConfig& cfg) {
  Tracker t;
  std::uint64_t sub = 0;
  for (double a : {0.3, 0.5, 0.7}) {
    for (double lam : {0.5, 1.0, 2.0}) {
      const auto est = numerics::mc_mean(
          [&](Rng& rng) { return std::exp(-lam * stable::sample(a, rng)); }, mc_for(cfg, 1, sub++, cfg.mc_samples));
      t.check(fmt("laplace alpha=%g lambda=%g", a, lam), std::abs(est.mean - std::exp(-std::pow(lam, a))),
              3.0 * est.std_error);
    }
  }
  for (int i = 0; i < 20; ++i) {
    const double x = 0.05 * std::pow(400.0, i / 19.0);
    t.check(fmt("kanter pdf t=%.4g", x), rel(stable::pdf_kanter(0.5, x), stable::pdf_half(x)), 1e-6);
  }
  return t.result(1, "stable-law certification");
}

CriterionResult c2(const SuiteConfig& cfg) {
  Tracker t;
  std::uint64_t sub = 0;
  for (double a : {0.3, 0.5, 0.7}) {
    // fold the tail onto (0, 1) through y -> 1/u
    const auto q = numerics::QuadConfig{}.with_hints(a - 1.0, std::nullopt);
    const double total =
        numerics::quad_finite([a](double y) { return lamperti::x_pdf(a, y); }, 0.0, 1.0, q) +
        numerics::quad_finite([a](double u) { return lamperti::x_pdf(a, 1.0 / u) / (u * u); }, 0.0, 1.0, q);
    t.check(fmt("x_pdf mass alpha=%g", a), std::abs(total - 1.0), 1e-8);
    Rng rng = Rng(mc_for(cfg, 2, sub++, 2).seed);
    std::vector<double> y(cfg.ks_samples);
    for (auto& v : y) v = stable::sample(a, rng) / stable::sample(a, rng);
    const double d = numerics::ks_statistic(std::move(y), [a](double x) { return lamperti::x_cdf(a, x); });
    t.check(fmt("KS S/S' alpha=%g", a), std::sqrt(static_cast<double>(cfg.ks_samples)) * d,
            numerics::kKsCritical1pct);
  }
  return t.result(2, "Lamperti certification");
}

CriterionResult c3(const SuiteConfig&) {
  Tracker t;
  struct P {
    int n, k;
    double t;
  };
  for (const P& p : {P{4, 2, 1.0}, P{6, 3, 0.25}, P{5, 1, 4.0}}) {
    const double q = gibbs::cond_g_quadrature(0.5, p.n, p.k, p.t);
    const double c = gibbs::cond_g_half_closed(p.n, p.k, p.t);
    t.check(fmt("cond_g n=%g k=%g t=%g", p.n, p.k, p.t), rel(q, c), 1e-8);
  }
  for (double a : {0.4, 0.5}) {
    for (double tt : {0.5, 2.0}) {
      for (int n : {2, 3}) {
        std::map<int, double> g;
        for (int k = 1; k <= n; ++k) g[k] = gibbs::cond_g(a, n, k, tt);
        double sum = 0.0;
        gibbs::for_each_set_partition(n, [&](const std::vector<int>& rgs) {
          const auto comp = gibbs::SetPartition::from_rgs(rgs).composition();
          double w = g[comp.k()];
          for (int s : comp.sizes) w *= specfun::rising(1.0 - a, s - 1);
          sum += w;
        });
        t.check(fmt("conditional sum alpha=%g t=%g n=%g", a, tt, n), std::abs(sum - 1.0), 1e-5);
      }
    }
  }
  return t.result(3, "alpha=1/2 conditional EPPF");
}

CriterionResult c4(const SuiteConfig&) {
  Tracker t;
  const std::pair<double, double> cases[] = {{0.5, 0.0}, {0.3, 1.0}, {0.7, -0.2}};
  for (const auto& [a, th] : cases) {
    const auto vt = gibbs::build_vtable(a, gibbs::PoissonDirichlet{th}, 6);
    std::vector<std::vector<double>> closed(6);
    for (int n = 1; n <= 6; ++n) {
      for (int k = 1; k <= n; ++k) {
        closed[n - 1].push_back(gibbs::pd_v(a, th, n, k));
        t.check(fmt("recursion vs closed alpha=%g theta=%g n=%g", a, th, n), std::abs(vt.at(n, k) - closed[n - 1].back()),
                1e-10);
      }
    }
    for (int n = 1; n < 6; ++n) {
      for (int k = 1; k <= n; ++k) {
        t.check(fmt("backward residual alpha=%g theta=%g n=%g", a, th, n),
                std::abs(gibbs::backward_residual(a, closed, n, k)), 1e-12);
      }
    }
  }
  return t.result(4, "recursion certificate");
}

CriterionResult c5(const SuiteConfig& cfg) {
  Tracker t;
  struct Case {
    const char* label;
    double alpha;
    gibbs::MixingModel model;
  };
  const Case cases[] = {
      {"PD(0.5,1)", 0.5, gibbs::PoissonDirichlet{1.0}},
      {"ExpTilt(0.6,b=1)", 0.6, gibbs::ExpTilt{1.0}},
      {"MLTilt(0.5,lambda=1)", 0.5, gibbs::MittagLefflerTilt{1.0}},
      {"Kolmogorov(0.5,tau=1)", 0.5, gibbs::Kolmogorov{1.0}},
      {"HermiteType(0.5,0.5,1)", 0.5, gibbs::HermiteType{0.5, 1.0}},
      {"BesselBridge(0.5,0.5,1,1)", 0.5, gibbs::BesselBridge{0.5, 1.0, 1}},
  };
  std::uint64_t sub = 0;
  for (const auto& c : cases) {
    gibbs::BuildConfig b;
    b.mc = mc_for(cfg, 5, sub++, cfg.mc_samples);
    b.prefer_direct = true;
    const auto direct = gibbs::build_vtable(c.alpha, c.model, 5, b);
    b.prefer_direct = false;
    const auto recursion = gibbs::build_vtable(c.alpha, c.model, 5, b);
    for (const auto* vt : {&direct, &recursion}) {
      const auto rep = gibbs::enumerate_check(*vt, 5);
      const bool mc = rep.sum_std_error > 0;
      t.check(std::string(c.label) + (vt == &direct ? " direct cells" : " recursion table"), rep.abs_error,
              mc ? 3.0 * rep.sum_std_error : 1e-5);
    }
  }
  return t.result(5, "sum-to-one enumeration");
}

CriterionResult c6(const SuiteConfig& cfg) {
  Tracker t;
  struct Case {
    std::string label;
    double alpha;
    gibbs::MixingModel model;
    gibbs::GenericH h;
  };
  const Case cases[] = {
      {"ExpTilt(0.6,b=1)", 0.6, gibbs::ExpTilt{1.0}, gibbs::exptilt_h(0.6, 1.0)},
      {"ModifiedBessel(0.5,eta=0.3)", 0.5, gibbs::ModifiedBessel{0.3}, gibbs::modified_bessel_h(0.3)},
  };
  std::uint64_t sub = 0;
  for (const auto& c : cases) {
    gibbs::BuildConfig b;
    b.mc = mc_for(cfg, 6, sub++, cfg.mc_samples);
    b.fallback = false;
    const auto vt = gibbs::build_vtable(c.alpha, c.model, 5, b);
    for (int n = 2; n <= 5; ++n) {
      for (int k = 1; k <= n; ++k) {
        const auto d = gibbs::generic_vnk(c.alpha, c.h, n, k, mc_for(cfg, 6, sub++, cfg.mc_samples));
        t.check(c.label + fmt(" n=%g k=%g", n, k), std::abs(vt.at(n, k) - d.mean),
                3.0 * std::hypot(vt.err(n, k), d.std_error));
      }
    }
  }
  return t.result(6, "cross-method agreement");
}

CriterionResult c7(const SuiteConfig&) {
  Tracker t;
  for (double a : {0.3, 0.5, 0.7}) {
    for (int i = 1; i <= 20; ++i) {
      const double lam = 0.5 * i;
      t.check(fmt("ML integral vs series alpha=%g lambda=%g", a, lam),
              rel(specfun::mittag_leffler(a, lam), specfun::mittag_leffler_series(a, lam)), 1e-8);
    }
  }
  const double series = specfun::mittag_leffler_series(0.5, 1.0);
  t.check("E_{1/2}(-1) vs series", std::abs(specfun::mittag_leffler(0.5, 1.0) - series), 1e-8);
  t.check("series vs e*erfc(1)", std::abs(series - std::exp(1.0) * std::erfc(1.0)), 1e-8);
  return t.result(7, "Mittag-Leffler dual route");
}

CriterionResult c8(const SuiteConfig&) {
  Tracker t;
  for (double th : {0.0, 0.5}) {
    for (int n = 2; n <= 5; ++n) {
      for (int k = 1; k <= n; ++k) {
        t.check(fmt("theta=%g n=%g k=%g", th, n, k),
                rel(lamperti::lamperti_cond_v(0.5, th, n, k), lamperti::lamperti_cond_v_half_2f1(th, n, k)), 1e-6);
      }
    }
    gibbs::BuildConfig b;
    b.prefer_direct = true;
    const auto vt = gibbs::build_vtable(0.5, gibbs::LampertiCond{th}, 5, b);
    t.check(fmt("certificate sum theta=%g", th), std::abs(gibbs::enumerate_check(vt, 5).sum - 1.0), 1e-6);
    double worst = 0.0;
    for (int n = 1; n < 5; ++n) {
      for (int k = 1; k <= n; ++k) {
        worst = std::max(worst, std::abs(gibbs::backward_residual(0.5, vt.v, n, k)) / vt.at(n, k));
      }
    }
    t.check(fmt("certificate residual theta=%g", th), worst, 1e-6);
  }
  return t.result(8, "alpha=1/2 2F1 closed form");
}

CriterionResult c9(const SuiteConfig& cfg) {
  Tracker t;
  std::uint64_t sub = 0;
  for (double y : {0.5, 1.0, 2.0}) {
    const auto est = numerics::mc_mean(
        [y](Rng& rng) {
          const double z = std::abs(numerics::sample_normal(rng));
          return z * excursion::mbr_sample(rng) <= y ? 1.0 : 0.0;
        },
        mc_for(cfg, 9, sub++, cfg.mc_samples));
    t.check(fmt("tanh identity y=%g", y), std::abs(est.mean - std::tanh(y)), 3.0 * est.std_error);
  }
  const double a = 0.5;
  const double tau = 1.0;
  std::map<std::pair<int, int>, numerics::McEstimate> p;
  for (int n = 1; n <= 4; ++n) {
    for (int k = 1; k <= n; ++k) p[{n, k}] = excursion::p_nk(a, tau, n, k, mc_for(cfg, 9, 100 + n * 10 + k, cfg.mc_samples));
  }
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= n; ++k) {
      const double c = (n - 0.5 * a) / ((k - 0.5) * a);
      const auto& a1 = p[{n, k}];
      const auto& b1 = p[{n + 1, k}];
      const auto& c1 = p[{n + 1, k + 1}];
      const double r = c1.mean - (c * (a1.mean - b1.mean) + b1.mean);
      const double se = std::sqrt(std::pow(c1.std_error, 2) + std::pow(c * a1.std_error, 2) +
                                  std::pow((1.0 - c) * b1.std_error, 2));
      t.check(fmt("p recursion n=%g k=%g", n, k), std::abs(r), 3.0 * se);
    }
  }
  return t.result(9, "excursion identities");
}

CriterionResult c10(const SuiteConfig& cfg) {
  Tracker t;
  const std::pair<double, double> grid[] = {{0.3, 0.0}, {0.5, 0.5}, {0.7, 1.2}, {0.5, -0.2}, {0.4, 2.0}};
  for (const auto& [a, th] : grid) {
    for (double s : {0.3, 1.0, 2.4}) {
      const auto [l, r] = betagamma::mellin_identity_check(a, th, s);
      t.check(fmt("mellin alpha=%g theta=%g s=%g", a, th, s), rel(l, r), 1e-12);
    }
  }
  const auto six = betagamma::mellin_identity_check(0.5, 0.5, 1.0);
  t.check("mellin (0.5,0.5,1) = 6", std::abs(six.first - 6.0) + std::abs(six.second - 6.0), 1e-12);

  std::uint64_t sub = 0;
  const double a = 0.5;
  const double th = 0.5;
  for (double lam : {0.5, 1.0, 2.0}) {
    const auto lhs = stable::tilted_expect(stable::TiltedStable(a, th),
                                           std::function<double(double)>([lam](double s) { return std::exp(-lam / s); }),
                                           mc_for(cfg, 10, sub++, cfg.mc_samples));
    const auto rhs = stable::tilted_expect(
        stable::TiltedStable(a, th + a), std::function<double(double, Rng&)>([&](double s, Rng& rng) {
          return std::exp(-lam * numerics::sample_beta(th + a, 1.0 - a, rng) / s);
        }),
        mc_for(cfg, 10, sub++, cfg.mc_samples));
    t.check(fmt("identity 1/S_theta lambda=%g", lam), std::abs(lhs.mean - rhs.mean),
            3.0 * std::hypot(lhs.std_error, rhs.std_error));
  }
  for (double al : {0.4, 0.5}) {
    for (int n : {2, 5}) {
      for (double lam : {0.5, 1.0, 2.0}) {
        const auto lhs = numerics::mc_mean(
            [&](Rng& rng) { return std::exp(-lam * stable::sample(al, rng) / numerics::sample_beta(1.0, n - 1.0, rng)); },
            mc_for(cfg, 10, sub++, cfg.mc_samples));
        const auto rhs = stable::tilted_expect(
            stable::TiltedStable(al, al), std::function<double(double, Rng&)>([&](double s, Rng& rng) {
              return std::exp(-lam * s / numerics::sample_beta(al, n - al, rng));
            }),
            mc_for(cfg, 10, sub++, cfg.mc_samples));
        t.check(fmt("identity k=1 alpha=%g n=%g lambda=%g", al, n, lam), std::abs(lhs.mean - rhs.mean),
                3.0 * std::hypot(lhs.std_error, rhs.std_error));
      }
    }
  }
  return t.result(10, "beta-gamma identities");
}

CriterionResult c11(const SuiteConfig& cfg) {
  Tracker t;
  struct Case {
    const char* label;
    gibbs::MixingModel model;
  };
  const Case cases[] = {{"PD(0.5,0)", gibbs::PoissonDirichlet{0.0}}, {"Kolmogorov(0.5,tau=1)", gibbs::Kolmogorov{1.0}}};
  const double crit = numerics::chi_square_quantile(14.0, 0.99);
  std::uint64_t sub = 0;
  for (const auto& c : cases) {
    const auto vt = gibbs::build_vtable(0.5, c.model, 4);
    std::map<std::vector<int>, double> expected;
    gibbs::for_each_set_partition(4, [&](const std::vector<int>& rgs) {
      expected[rgs] = gibbs::eppf(vt, gibbs::SetPartition::from_rgs(rgs).composition()).value;
    });
    std::map<std::vector<int>, long> counts;
    Rng rng(mc_for(cfg, 11, sub++, 2).seed);
    for (std::size_t i = 0; i < cfg.sampler_draws; ++i) ++counts[gibbs::sample_partition(vt, 4, rng).rgs()];
    double chi2 = 0.0;
    const double draws = static_cast<double>(cfg.sampler_draws);
    for (const auto& [rgs, pr] : expected) {
      const double e = draws * pr;
      const double o = static_cast<double>(counts[rgs]);
      chi2 += (o - e) * (o - e) / e;
    }
    t.check(std::string(c.label) + " chi-square", chi2, crit);
  }
  return t.result(11, "sampler law");
}

CriterionResult c12(const SuiteConfig& cfg) {
  Tracker t;
  gibbs::BuildConfig b;
  b.mc = mc_for(cfg, 12, 0, std::min<std::size_t>(cfg.mc_samples, 100000));
  b.prefer_direct = true;
  const auto first = vtable_to_json(gibbs::build_vtable(0.5, gibbs::Kolmogorov{1.0}, 5, b));
  const auto second = vtable_to_json(gibbs::build_vtable(0.5, gibbs::Kolmogorov{1.0}, 5, b));
  t.check("in-process table bytes", first == second ? 0.0 : 1.0, 0.5);
  auto r = t.result(12, "reproducibility");
  r.note = "CLI byte identity and suite timing are checked by the acceptance binary";
  return r;
}

}  // namespace

Suite parse_suite(const std::string& s) {
  if (s == "quick") return Suite::quick;
  if (s == "full") return Suite::full;
  throw DomainError("unknown suite '" + s + "' (expected quick or full)");
}

SuiteConfig suite_config(Suite suite, std::uint64_t seed) {
  SuiteConfig c;
  c.suite = suite;
  c.seed = seed;
  if (suite == Suite::quick) {
    c.mc_samples = 100000;
    c.ks_samples = 20000;
    c.sampler_draws = 20000;
  }
  return c;
}

CriterionResult run_criterion(int id, const SuiteConfig& cfg) {
  using Fn = CriterionResult (*)(const SuiteConfig&);
  static const Fn table[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
  if (id < 1 || id > 12) throw DomainError("criterion id must lie in 1..12");
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = table[id - 1](cfg);
  } catch (const std::exception& e) {
    r.id = id;
    r.name = "criterion " + std::to_string(id);
    r.passed = false;
    r.worst_ratio = std::numeric_limits<double>::infinity();
    r.worst_case = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const SuiteConfig& cfg,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 12; ++id) {
    out.push_back(run_criterion(id, cfg));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s %2d %-28s worst %.3g of tolerance over %d checks (%s) %.1fs",
                r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.worst_ratio, r.checks, r.worst_case.c_str(),
                r.seconds);
  std::string s = buf;
  if (!r.note.empty()) s += " [" + r.note + "]";
  return s;
}

}  // namespace stablepk::validation
