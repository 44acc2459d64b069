#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ldspec/error.hpp"
#include "ldspec/floquet.hpp"
#include "oracles.hpp"
#include "random_coeffs.hpp"

using namespace ldspec;
using namespace ldspec::testing;
constexpr double pi = std::numbers::pi;

namespace {

Model constant_model(double omega = 2 * pi) {
  return build_model({"constant", {{"q1", 1.0}, {"r1", 1.0}, {"omega", omega}}});
}

Model free_model(double omega) {
  return {"free", PeriodicPotential::constant(omega, 0.0), SignedWeight::constant(omega, 1.0), {}};
}

void check_list(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

}  // namespace

TEST_CASE("monodromy closed forms") {
  SUBCASE("free rotation") {
    const Model m = free_model(pi);
    const Monodromy M = monodromy(m.q, m.r, 1.0);
    CHECK(std::abs(M.m[0] + 1.0) < 1e-12);
    CHECK(std::abs(M.m[1]) < 1e-12);
    CHECK(std::abs(M.m[2]) < 1e-12);
    CHECK(std::abs(M.m[3] + 1.0) < 1e-12);
  }
  SUBCASE("double zero") {
    const Model m = constant_model(3.0);
    const Monodromy M = monodromy(m.q, m.r, 1.0);
    CHECK(std::abs(M.m[0] - 1.0) < 1e-14);
    CHECK(std::abs(M.m[1] - 3.0) < 1e-14);
    CHECK(std::abs(M.m[2]) < 1e-14);
    CHECK(std::abs(M.m[3] - 1.0) < 1e-14);
  }
  SUBCASE("kronig-penney") {
    const double alpha = 1.0, omega = 2 * pi;
    const Model m = build_model({"kronig_penney", {{"alpha", alpha}}});
    for (double k : {0.3, 0.9, 1.45, 2.2}) {
      const Monodromy M = monodromy(m.q, m.r, k * k);
      // quasi variables at 0 differ from classical (y, y'(0+)) by Q2(0+)
      const double q2p = m.q.q2().right_limit(0.0);
      const C2 L{1.0, 0.0, -q2p, 1.0}, Linv{1.0, 0.0, q2p, 1.0};
      const C2 ref = mul2(L, mul2(mul2(delta_jump(alpha), free_evolution(-k * k, omega)), Linv));
      for (int i = 0; i < 4; ++i) CHECK(std::abs(M.m[i] - ref[i]) < 1e-9);
      CHECK(M.det_residual < 1e-8);
    }
  }
}

TEST_CASE("discriminant closed forms") {
  CHECK(discriminant(free_model(2 * pi).q, free_model(2 * pi).r, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  const Model c = constant_model();
  CHECK(std::abs(discriminant(c.q, c.r, 0.0) - 2 * std::cosh(2 * pi)) < 1e-8);
  for (double alpha : {0.5, 1.0, 4.0}) {
    const Model m = build_model({"kronig_penney", {{"alpha", alpha}}});
    for (double z : {0.05, 0.7, 3.3, 12.0}) CHECK(std::abs(discriminant(m.q, m.r, z) - kronig_penney_trace(alpha, 2 * pi, z)) < 1e-8);
  }
}

TEST_CASE("discriminant derivative") {
  const Model m = build_model({"step_weight", {}});
  for (double z : {-2.0, 0.3, 4.0}) {
    const DiscriminantSample s = discriminant_sample(m.q, m.r, z);
    const double h = 1e-5;
    const double fd = (discriminant(m.q, m.r, z + h) - discriminant(m.q, m.r, z - h)) / (2 * h);
    CHECK(s.ddelta == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("stability_intervals") {
  SUBCASE("free case covers the whole range") {
    const Model m = free_model(2 * pi);
    const BandSet b = stability_intervals(m.q, m.r, 0.01, 9.0);
    REQUIRE(b.intervals.size() == 1);
    CHECK(b.intervals[0].lo == doctest::Approx(0.01));
    CHECK(b.intervals[0].hi == doctest::Approx(9.0));
    CHECK(b.components.size() > 1);
    CHECK(b.warnings.empty());
  }
  SUBCASE("constant below threshold is empty") {
    const Model m = constant_model();
    CHECK(stability_intervals(m.q, m.r, -2.0, 0.99).intervals.empty());
  }
  SUBCASE("constant bands") {
    const Model m = constant_model();
    const BandSet b = stability_intervals(m.q, m.r, 0.0, 30.0);
    REQUIRE(b.intervals.size() == 1);
    CHECK(std::abs(b.intervals[0].lo - 1.0) < 1e-8);
    CHECK(b.intervals[0].hi == 30.0);
    std::vector<double> edges;
    for (const auto& c : b.components) edges.push_back(c.lo);
    check_list(edges, {1.0, 1.25, 2.0, 3.25, 5.0, 7.25, 10.0, 13.25, 17.0, 21.25, 26.0}, 1e-8);
  }
  SUBCASE("kronig-penney edges against the closed form") {
    // alpha = 0.5 has gaps narrower than the scan spacing above z = 12.
    const double omega = 2 * pi, top = 40.0;
    for (double alpha : {0.5, 1.0}) {
      const Model m = build_model({"kronig_penney", {{"alpha", alpha}}});
      const BandSet b = stability_intervals(m.q, m.r, 0.01, top);
      // oracle: bracket |D| - 2 on a fine sqrt grid and bisect
      std::vector<double> edges;
      auto g = [&](double z) { return std::abs(kronig_penney_trace(alpha, omega, z)) - 2.0; };
      double prev = std::sqrt(0.01);
      for (int i = 1; i <= 40000; ++i) {
        const double k = std::sqrt(0.01) + (std::sqrt(top) - std::sqrt(0.01)) * i / 40000;
        if ((g(prev * prev) < 0) != (g(k * k) < 0)) edges.push_back(bisect(g, prev * prev, k * k));
        prev = k;
      }
      std::vector<double> got;
      for (const auto& iv : b.intervals) {
        if (iv.lo > 0.01) got.push_back(iv.lo);
        if (iv.hi < top) got.push_back(iv.hi);
      }
      check_list(got, edges, 1e-8);
    }
  }
  SUBCASE("coarse scan warns") {
    // Delta(0.01) > 2 and Delta(0.3025) < -2 for alpha = 4: a band lies between.
    const Model m = build_model({"kronig_penney", {{"alpha", 4.0}}});
    ScanOptions o;
    o.n_scan = 2;
    CHECK(kronig_penney_trace(4.0, 2 * pi, 0.0100) > 2.0);
    CHECK(kronig_penney_trace(4.0, 2 * pi, 0.3025) < -2.0);
    CHECK_FALSE(stability_intervals(m.q, m.r, 0.01, 0.3025, o).warnings.empty());
  }
}

TEST_CASE("theta_eigenvalues closed forms") {
  const Model m = constant_model();
  check_list(theta_eigenvalues(m.q, m.r, 0.0, 0.0, 30.0).values, {1, 2, 2, 5, 5, 10, 10, 17, 17, 26, 26}, 1e-8);
  check_list(theta_eigenvalues(m.q, m.r, pi, 0.0, 30.0).values, {1.25, 1.25, 3.25, 3.25, 7.25, 7.25, 13.25, 13.25, 21.25, 21.25},
             1e-8);
  const Model f = free_model(2 * pi);
  std::vector<double> want;
  for (int n = -6; n <= 6; ++n)
    if ((n + 0.25) * (n + 0.25) <= 30.0) want.push_back((n + 0.25) * (n + 0.25));
  std::sort(want.begin(), want.end());
  check_list(theta_eigenvalues(f.q, f.r, pi / 2, 0.0, 30.0).values, want, 1e-8);
  CHECK_THROWS_AS(theta_eigenvalues(m.q, m.r, 7.0, 0.0, 1.0), FloquetError);
}

TEST_CASE("floquet invariants on random coefficients") {
  CoeffGen gen(404);
  for (int trial = 0; trial < 50; ++trial) {
    const double period = gen.uniform(1.0, 4.0);
    const PeriodicPotential q = gen.potential(period);
    const SignedWeight r = gen.weight(period);
    for (double z : {gen.uniform(-2.0, 0.0), gen.uniform(0.0, 20.0)}) {
      const Monodromy M = monodromy(q, r, z);
      CHECK(M.det_residual < 1e-8);
      CHECK(std::abs(M.trace().imag()) <= 1e-9);
    }
  }
}

TEST_CASE("theta symmetry and reference point") {
  CoeffGen gen(505);
  for (int trial = 0; trial < 10; ++trial) {
    const double period = gen.uniform(1.0, 3.0);
    const PeriodicPotential q = gen.potential(period);
    const SignedWeight r = gen.weight(period);
    const double theta = gen.uniform(0.1, pi - 0.1);
    const ThetaSpectrum a = theta_eigenvalues(q, r, theta, -20.0, 20.0);
    const ThetaSpectrum b = theta_eigenvalues(q, r, 2 * pi - theta, -20.0, 20.0);
    check_list(a.values, b.values, 1e-9);
  }
}

TEST_CASE("interlacing on scans") {
  const Model m = build_model({"kronig_penney", {{"alpha", 2.0}}});
  const ThetaSpectrum t = theta_eigenvalues(m.q, m.r, 0.0, 0.0, 25.0);
  for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
    if (t.values[i + 1] - t.values[i] < 1e-6) continue;
    double peak = 0.0;
    for (int j = 1; j < 50; ++j) {
      const double z = t.values[i] + (t.values[i + 1] - t.values[i]) * j / 50.0;
      peak = std::max(peak, std::abs(discriminant(m.q, m.r, z)));
    }
    CHECK(peak >= 2.0);
  }
}
