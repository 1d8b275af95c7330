#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stablepk/gibbs.hpp"
#include "stablepk/lamperti.hpp"
#include "stablepk/model_spec.hpp"
#include "stablepk/specfun.hpp"
#include "stablepk/stable.hpp"
#include "stablepk/validation.hpp"
#include "stablepk/vtable_io.hpp"

using namespace stablepk;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCertification = 2;

struct Common {
  double alpha = 0.5;
  std::string model = "pd:theta=0";
  std::uint64_t seed = numerics::kDefaultSeed;
  std::size_t mc_samples = numerics::default_mc_samples();
  double quad_tol = 1e-10;
  std::string format;  // empty: json for vtable, text elsewhere
  std::string out;
};

void add_format(CLI::App* app, Common& c, const std::vector<std::string>& choices) {
  app->add_option("--format", c.format, "output format")->check(CLI::IsMember(choices));
}

void add_model_flags(CLI::App* app, Common& c) {
  app->add_option("--alpha", c.alpha, "stability index in (0,1)")->capture_default_str();
  app->add_option("--model", c.model, "model descriptor, e.g. pd:theta=1")->capture_default_str();
  app->add_option("--seed", c.seed, "random seed")->capture_default_str();
  app->add_option("--mc-samples", c.mc_samples, "Monte Carlo sample count (default from STABLEPK_MC_SAMPLES or 1e6)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--quad-tol", c.quad_tol, "relative quadrature tolerance")->check(CLI::PositiveNumber)
      ->capture_default_str();
}

gibbs::BuildConfig build_config(const Common& c) {
  gibbs::BuildConfig b;
  b.quad.rel_tol = c.quad_tol;
  b.mc.n_samples = c.mc_samples;
  b.mc.seed = c.seed;
  return b;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error("cannot open output file '" + c.out + "'");
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

ordered_json value_json(const Common& c, double value, double std_error, Method method, bool with_model) {
  ordered_json j;
  j["value"] = value;
  j["std_error"] = std_error;
  j["method"] = std::string(method_name(method));
  if (with_model) j["model"] = c.model;
  j["alpha"] = c.alpha;
  j["seed"] = c.seed;
  return j;
}

std::string value_text(double value, double std_error, Method method) {
  return format_double(value) + " " + format_double(std_error) + " " + std::string(method_name(method));
}

gibbs::Composition parse_composition(const std::string& s) {
  gibbs::Composition comp;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw DomainError("composition: '" + part + "' is not an integer");
    }
    if (used != part.size()) throw DomainError("composition: '" + part + "' is not an integer");
    comp.sizes.push_back(v);
  }
  comp.validate();
  return comp;
}

int cmd_vtable(const Common& c, int n) {
  const auto vt = gibbs::build_vtable(c.alpha, parse_model(c.model), n, build_config(c));
  emit(c, c.format == "csv" ? vtable_to_csv(vt) : vtable_to_json(vt));
  return vt.cert.passed ? kExitOk : kExitCertification;
}

int cmd_eppf(const Common& c, const std::string& composition) {
  const auto comp = parse_composition(composition);
  const auto vt = gibbs::build_vtable(c.alpha, parse_model(c.model), comp.n(), build_config(c));
  const auto e = gibbs::eppf(vt, comp);
  if (c.format == "json") {
    auto j = value_json(c, e.value, e.std_error, e.method, true);
    j["composition"] = comp.sizes;
    j["certified"] = vt.cert.passed;
    emit(c, j.dump(2));
  } else {
    emit(c, value_text(e.value, e.std_error, e.method));
  }
  return vt.cert.passed ? kExitOk : kExitCertification;
}

int cmd_sample(const Common& c, int n, int count) {
  const auto vt = gibbs::build_vtable(c.alpha, parse_model(c.model), n, build_config(c));
  numerics::Rng rng(numerics::splitmix64(c.seed ^ 0x5a4d504cULL));
  std::vector<std::vector<int>> rgs;
  for (int i = 0; i < count; ++i) rgs.push_back(gibbs::sample_partition(vt, n, rng).rgs());
  if (c.format == "json") {
    ordered_json j;
    j["model"] = c.model;
    j["alpha"] = c.alpha;
    j["seed"] = c.seed;
    j["n"] = n;
    j["partitions"] = rgs;
    emit(c, j.dump(2));
  } else {
    std::string text;
    for (const auto& r : rgs) {
      for (std::size_t i = 0; i < r.size(); ++i) text += (i ? "," : "") + std::to_string(r[i]);
      text += '\n';
    }
    emit(c, text);
  }
  return vt.cert.passed ? kExitOk : kExitCertification;
}

int cmd_stable(const Common& c, const std::string& what, double t, int count) {
  const StabilityIndex alpha(c.alpha);
  if (what == "pdf") {
    const double v = stable::pdf(alpha, t);
    const Method m = alpha.is_half() ? Method::closed_form : Method::quadrature;
    if (c.format == "json") {
      auto j = value_json(c, v, 0.0, m, false);
      j["t"] = t;
      emit(c, j.dump(2));
    } else {
      emit(c, value_text(v, 0.0, m));
    }
    return kExitOk;
  }
  numerics::Rng rng(c.seed);
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) xs.push_back(stable::sample(alpha, rng));
  if (c.format == "json") {
    ordered_json j;
    j["alpha"] = c.alpha;
    j["seed"] = c.seed;
    j["samples"] = xs;
    emit(c, j.dump(2));
  } else {
    std::string text;
    for (double x : xs) text += format_double(x) + '\n';
    emit(c, text);
  }
  return kExitOk;
}

int cmd_lamperti(const Common& c, const std::string& what, double y) {
  const double v = what == "pdf" ? lamperti::x_pdf(c.alpha, y) : lamperti::x_cdf(c.alpha, y);
  if (c.format == "json") {
    auto j = value_json(c, v, 0.0, Method::closed_form, false);
    j["y"] = y;
    emit(c, j.dump(2));
  } else {
    emit(c, value_text(v, 0.0, Method::closed_form));
  }
  return kExitOk;
}

int cmd_ml(const Common& c, double lambda) {
  numerics::QuadConfig q;
  q.rel_tol = c.quad_tol;
  const double v = specfun::mittag_leffler(c.alpha, lambda, q);
  if (c.format == "json") {
    auto j = value_json(c, v, 0.0, Method::quadrature, false);
    j["lambda"] = lambda;
    emit(c, j.dump(2));
  } else {
    emit(c, value_text(v, 0.0, Method::quadrature));
  }
  return kExitOk;
}

int cmd_validate(const Common& c, const std::string& suite) {
  const auto cfg = validation::suite_config(validation::parse_suite(suite), c.seed);
  const bool json = c.format == "json";
  const auto results = validation::run_acceptance(cfg, [json](const validation::CriterionResult& r) {
    if (!json) std::cout << validation::format_line(r) << std::endl;
  });
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (json) {
    ordered_json j;
    j["suite"] = suite;
    j["seed"] = c.seed;
    j["passed"] = all;
    for (const auto& r : results) {
      ordered_json e;
      e["id"] = r.id;
      e["name"] = r.name;
      e["passed"] = r.passed;
      e["worst_ratio"] = r.worst_ratio;
      e["worst_case"] = r.worst_case;
      e["checks"] = r.checks;
      if (!r.note.empty()) e["note"] = r.note;
      j["criteria"].push_back(e);
    }
    emit(c, j.dump(2));
  }
  return all ? kExitOk : kExitCertification;
}

int report_error(const std::string& format, const std::string& kind, const std::string& message, int code) {
  if (format == "json") {
    ordered_json j;
    j["error"] = {{"type", kind}, {"message", message}, {"exit_code", code}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cerr << "stablepk: " << kind << ": " << message << '\n';
  }
  return code;
}

// Format is needed before parsing succeeds, to shape error output.
std::string sniff_format(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--format" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--format=", 0) == 0) return a.substr(9);
  }
  return "text";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EPPFs of Gibbs partitions generated by alpha-stable subordinators"};
  app.require_subcommand(1);
  Common c;

  int vt_n = 5;
  auto* vtable = app.add_subcommand("vtable", "build and certify a V-table");
  add_model_flags(vtable, c);
  vtable->add_option("--n", vt_n, "largest n")->check(CLI::Range(1, 200))->capture_default_str();
  vtable->add_option("--out", c.out, "write to this file instead of standard output");
  add_format(vtable, c, {"json", "csv"});

  std::string composition;
  auto* eppf = app.add_subcommand("eppf", "EPPF of a composition");
  add_model_flags(eppf, c);
  eppf->add_option("--composition", composition, "block sizes, e.g. 2,1,1")->required();
  eppf->add_option("--out", c.out, "write to this file instead of standard output");

  int sample_n = 5;
  int sample_count = 1;
  auto* sample = app.add_subcommand("sample", "draw partitions as restricted growth strings");
  add_model_flags(sample, c);
  sample->add_option("--n", sample_n, "partition size")->check(CLI::Range(1, 200))->capture_default_str();
  sample->add_option("--count", sample_count, "number of partitions")->check(CLI::PositiveNumber)
      ->capture_default_str();
  sample->add_option("--out", c.out, "write to this file instead of standard output");

  std::string stable_what;
  double stable_t = 1.0;
  int stable_count = 1;
  auto* stablec = app.add_subcommand("stable", "positive stable density or draws");
  stablec->add_option("what", stable_what, "pdf or sample")->required()->check(CLI::IsMember({"pdf", "sample"}));
  stablec->add_option("--alpha", c.alpha, "stability index")->capture_default_str();
  stablec->add_option("--t", stable_t, "point for pdf")->capture_default_str();
  stablec->add_option("--count", stable_count, "number of draws")->check(CLI::PositiveNumber)->capture_default_str();
  stablec->add_option("--seed", c.seed, "random seed")->capture_default_str();

  std::string lamperti_what;
  double lamperti_y = 1.0;
  auto* lampertic = app.add_subcommand("lamperti", "law of a ratio of independent stable variables");
  lampertic->add_option("what", lamperti_what, "pdf or cdf")->required()->check(CLI::IsMember({"pdf", "cdf"}));
  lampertic->add_option("--alpha", c.alpha, "stability index")->capture_default_str();
  lampertic->add_option("--y", lamperti_y, "point")->capture_default_str();

  double ml_lambda = 1.0;
  auto* ml = app.add_subcommand("ml", "Mittag-Leffler function E_alpha(-lambda)");
  ml->add_option("--alpha", c.alpha, "stability index")->capture_default_str();
  ml->add_option("--lambda", ml_lambda, "argument, lambda >= 0")->capture_default_str();
  ml->add_option("--quad-tol", c.quad_tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);

  std::string suite = "quick";
  auto* validate = app.add_subcommand("validate", "run the acceptance suite");
  validate->add_option("--suite", suite, "quick or full")->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  validate->add_option("--seed", c.seed, "suite seed")->capture_default_str();

  for (auto* sub : {eppf, sample, stablec, lampertic, ml, validate}) add_format(sub, c, {"text", "json"});

  const std::string sniffed = sniff_format(argc, argv);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (sniffed == "json") return report_error(sniffed, "usage", e.what(), kExitError);
    return app.exit(e) == 0 ? 0 : kExitError;
  }
  if (c.format.empty()) c.format = vtable->parsed() ? "json" : "text";

  try {
    if (vtable->parsed()) return cmd_vtable(c, vt_n);
    if (eppf->parsed()) return cmd_eppf(c, composition);
    if (sample->parsed()) return cmd_sample(c, sample_n, sample_count);
    if (stablec->parsed()) return cmd_stable(c, stable_what, stable_t, stable_count);
    if (lampertic->parsed()) return cmd_lamperti(c, lamperti_what, lamperti_y);
    if (ml->parsed()) return cmd_ml(c, ml_lambda);
    if (validate->parsed()) return cmd_validate(c, suite);
  } catch (const DomainError& e) {
    return report_error(c.format, "domain", e.what(), kExitError);
  } catch (const std::exception& e) {
    return report_error(c.format, "runtime", e.what(), kExitError);
  }
  return kExitError;
}
