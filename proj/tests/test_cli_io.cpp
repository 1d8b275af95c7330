#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "stablepk/gibbs.hpp"
#include "stablepk/model_spec.hpp"
#include "stablepk/vtable_io.hpp"

using namespace stablepk;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(STABLEPK_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("model descriptors") {
  for (const char* s : {"pd:theta=1", "kolmogorov:tau=1", "exptilt:b=0.5", "besselbridge:delta=0.5,w=1,j=1",
                        "mltilt:lambda=1", "hermitetype:theta=0.5,lambda=1", "pointmass:t=2", "lampcond:theta=0",
                        "lampclass:g=exp", "betagamma:theta=0.2,g=inv1p", "modbessel:eta=0.3"}) {
    CHECK(describe_model(parse_model(s)) == s);
  }
  CHECK(std::holds_alternative<gibbs::BesselBridge>(parse_model("besselbridge:w=1,j=1,delta=0.5")));
  CHECK(std::get<gibbs::BesselBridge>(parse_model("besselbridge:delta=0.5,w=2,j=3")).j == 3);
  for (const char* bad : {"", "pd", "pd:theta", "pd:theta=x", "pd:theta=1,theta=2", "pd:alpha=1", "nosuch:x=1",
                          "besselbridge:delta=0.5,w=1", "besselbridge:delta=0.5,w=1,j=1.5", "lampclass:g=sin"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_model(bad), DomainError);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("table serialization") {
  const auto vt = gibbs::build_vtable(0.3, gibbs::PoissonDirichlet{1.0}, 5);
  const auto text = vtable_to_json(vt);
  const auto back = vtable_from_json(text);
  CHECK(back.N == 5);
  CHECK(back.model == "pd:theta=1");
  for (int n = 1; n <= 5; ++n)
    for (int k = 1; k <= n; ++k) {
      CHECK(back.at(n, k) == vt.at(n, k));
      CHECK(back.method[n - 1][k - 1] == vt.method[n - 1][k - 1]);
    }
  CHECK(vtable_to_json(back) == text);
  const auto j = json::parse(text);
  CHECK(j["alpha"] == 0.3);
  CHECK(j["rows"][1][1]["v"].get<double>() == vt.at(2, 2));
  CHECK(j["certification"]["passed"] == true);
  const auto csv = vtable_to_csv(vt);
  CHECK(csv.rfind("n,k,v,sigma,method\n1,1,1,0,", 0) == 0);
  CHECK_THROWS(vtable_from_json("{\"alpha\": 0.5}"));
}

TEST_CASE("command line") {
  const auto csv = run_cli("vtable --alpha 0.5 --model pd:theta=1 --n 6 --format csv");
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("n,k,v,sigma,method\n1,1,1,0,", 0) == 0);

  const auto a = run_cli("vtable --alpha 0.5 --model kolmogorov:tau=1 --n 5 --seed 42");
  const auto b = run_cli("vtable --alpha 0.5 --model kolmogorov:tau=1 --n 5 --seed 42");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  const auto pd = run_cli("vtable --alpha 0.5 --model pd:theta=0 --n 2");
  REQUIRE(pd.code == 0);
  const auto j = json::parse(pd.out);
  CHECK(j["rows"][1][0]["v"].get<double>() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(j["rows"][1][1]["v"].get<double>() == doctest::Approx(0.5).epsilon(1e-15));

  const auto e = run_cli("eppf --alpha 0.5 --model pd:theta=0 --composition 2");
  CHECK(e.code == 0);
  CHECK(std::stod(e.out) == doctest::Approx(0.5).epsilon(1e-15));
  const auto ej = json::parse(run_cli("eppf --alpha 0.5 --model pd:theta=0 --composition 2,1 --format json").out);
  for (const char* key : {"value", "std_error", "method", "model", "alpha", "seed"}) CHECK(ej.contains(key));

  const auto ml = run_cli("ml --alpha 0.5 --lambda 0");
  CHECK(ml.code == 0);
  CHECK(std::stod(ml.out) == 1.0);

  const auto s = run_cli("sample --alpha 0.5 --model pd:theta=1 --n 4 --count 3 --seed 5");
  CHECK(s.code == 0);
  CHECK(s.out.rfind("0,", 0) == 0);
  CHECK(s.out == run_cli("sample --alpha 0.5 --model pd:theta=1 --n 4 --count 3 --seed 5").out);

  CHECK(std::stod(run_cli("stable pdf --alpha 0.5 --t 1").out) == doctest::Approx(0.2196956447).epsilon(1e-9));
  CHECK(std::stod(run_cli("lamperti cdf --alpha 0.3 --y 1").out) == doctest::Approx(0.5).epsilon(1e-14));

  CHECK(run_cli("vtable --alpha 0.5 --model nosuch:x=1 --n 3").code == 1);
  CHECK(run_cli("vtable --alpha 0.5 --n 3 --bogus").code == 1);
  CHECK(run_cli("").code == 1);
  const auto err = run_cli("eppf --alpha 0.5 --model pd:theta=-3 --composition 2 --format json");
  CHECK(err.code == 1);
  const auto ejson = json::parse(err.out);
  CHECK(ejson["error"]["type"] == "domain");
}
