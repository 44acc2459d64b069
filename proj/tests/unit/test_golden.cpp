#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "ldspec/floquet.hpp"
#include "ldspec/susy.hpp"

using namespace ldspec;
using json = nlohmann::json;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(LDSPEC_GOLDEN_DIR) + "/" + name);
  REQUIRE(in);
  return json::parse(in);
}

PiecewisePoly piecewise(const json& j, double period) {
  std::vector<poly::Poly> pieces;
  for (const auto& p : j["pieces"]) pieces.push_back(p.get<poly::Poly>());
  return PiecewisePoly(period, j["breaks"].get<std::vector<double>>(), std::move(pieces));
}

}  // namespace

// Reference run of phi = 1/2 + cos x at N = 128, theta = 0.
TEST_CASE("golden partner spectrum of a field with mean 1/2") {
  const json doc = load("half_cos_susy.json");
  const json& coeff = doc["inputs"]["model"]["coefficients"];
  const double period = coeff["period"];
  const MiuraField phi(piecewise(coeff["miura"]["phi"], period));
  const json& golden = doc["results"]["spectra"][0];
  REQUIRE(golden["theta"].get<double>() == 0.0);
  REQUIRE(doc["engine"]["modes"].get<int>() == 128);

  const PartnerSpectra now = schrodinger_pair_spectra(phi, 0.0, 128);
  const auto t1 = golden["t1"].get<std::vector<double>>();
  REQUIRE(now.t1.size() == t1.size());
  for (std::size_t i = 0; i < t1.size(); ++i) CHECK(now.t1[i] == doctest::Approx(t1[i]).epsilon(1e-10));

  // Independent check: the bottom of the spectrum is the lowest periodic
  // eigenvalue of -y'' + (phi^2 - phi') y = z y.
  const PeriodicPotential q = miura_forward(phi, Partner::first);
  const ThetaSpectrum fl = theta_eigenvalues(q, SignedWeight::constant(period, 1.0), 0.0, -1.0, 1.0);
  REQUIRE(!fl.values.empty());
  CHECK(golden["min_t1"].get<double>() == doctest::Approx(fl.values.front()).epsilon(1e-8));
}
