#include "stablepk/vtable_io.hpp"

#include <sstream>

#include "json.hpp"
#include "stablepk/model_spec.hpp"

namespace stablepk {

using nlohmann::json;

namespace {

json cert_json(const gibbs::Certification& c) {
  json flagged = json::array();
  for (const auto& [n, k] : c.flagged) flagged.push_back({n, k});
  json j{{"passed", c.passed},
         {"v11_ok", c.v11_ok},
         {"worst_residual_ratio", c.worst_residual},
         {"positivity_failures", c.positivity_failures},
         {"min_margin", c.min_margin},
         {"flagged", flagged}};
  if (c.enumerated_n) {
    j["enumerated_n"] = *c.enumerated_n;
    j["sum_minus_one"] = c.sum_minus_one;
    j["sum_tolerance"] = c.sum_tolerance;
  }
  return j;
}

gibbs::Certification cert_from_json(const json& j) {
  gibbs::Certification c;
  c.passed = j.at("passed").get<bool>();
  c.v11_ok = j.at("v11_ok").get<bool>();
  c.worst_residual = j.at("worst_residual_ratio").get<double>();
  c.positivity_failures = j.at("positivity_failures").get<int>();
  c.min_margin = j.at("min_margin").get<double>();
  for (const auto& f : j.at("flagged")) c.flagged.emplace_back(f.at(0).get<int>(), f.at(1).get<int>());
  if (j.contains("enumerated_n")) {
    c.enumerated_n = j.at("enumerated_n").get<int>();
    c.sum_minus_one = j.at("sum_minus_one").get<double>();
    c.sum_tolerance = j.at("sum_tolerance").get<double>();
  }
  return c;
}

}  // namespace

std::string vtable_to_json(const gibbs::VTable& vt, int indent) {
  json rows = json::array();
  for (int n = 1; n <= vt.N; ++n) {
    json row = json::array();
    for (int k = 1; k <= n; ++k) {
      row.push_back({{"v", vt.at(n, k)},
                     {"sigma", vt.err(n, k)},
                     {"method", std::string(method_name(vt.method[n - 1][k - 1]))},
                     {"flagged", static_cast<bool>(vt.flagged[n - 1][k - 1])}});
    }
    rows.push_back(std::move(row));
  }
  json j{{"alpha", vt.alpha.value()}, {"model", vt.model},          {"N", vt.N},
         {"seed", vt.seed},           {"rows", std::move(rows)},    {"certification", cert_json(vt.cert)}};
  return j.dump(indent);
}

gibbs::VTable vtable_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw DomainError(std::string("vtable json: ") + e.what());
  }
  try {
    gibbs::VTable vt;
    vt.alpha = StabilityIndex(j.at("alpha").get<double>());
    vt.model = j.at("model").get<std::string>();
    vt.seed = j.at("seed").get<std::uint64_t>();
    vt.resize(j.at("N").get<int>());
    const auto& rows = j.at("rows");
    if (static_cast<int>(rows.size()) != vt.N) throw DomainError("vtable json: row count differs from N");
    for (int n = 1; n <= vt.N; ++n) {
      const auto& row = rows.at(n - 1);
      if (static_cast<int>(row.size()) != n) throw DomainError("vtable json: row " + std::to_string(n) + " has wrong length");
      for (int k = 1; k <= n; ++k) {
        const auto& cell = row.at(k - 1);
        vt.v[n - 1][k - 1] = cell.at("v").get<double>();
        vt.sigma[n - 1][k - 1] = cell.at("sigma").get<double>();
        vt.method[n - 1][k - 1] = parse_method(cell.at("method").get<std::string>());
        vt.flagged[n - 1][k - 1] = cell.value("flagged", false);
      }
    }
    vt.cert = cert_from_json(j.at("certification"));
    return vt;
  } catch (const json::exception& e) {
    throw DomainError(std::string("vtable json: ") + e.what());
  }
}

std::string vtable_to_csv(const gibbs::VTable& vt) {
  std::ostringstream os;
  os << "n,k,v,sigma,method\n";
  for (int n = 1; n <= vt.N; ++n) {
    for (int k = 1; k <= n; ++k) {
      os << n << ',' << k << ',' << format_double(vt.at(n, k)) << ',' << format_double(vt.err(n, k)) << ','
         << method_name(vt.method[n - 1][k - 1]) << '\n';
    }
  }
  return os.str();
}

}  // namespace stablepk
