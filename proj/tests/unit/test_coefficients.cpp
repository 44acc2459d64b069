#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ldspec/coefficients.hpp"
#include "ldspec/error.hpp"
#include "ldspec/fit.hpp"
#include "random_coeffs.hpp"

using namespace ldspec;
constexpr double pi = std::numbers::pi;

namespace {

PiecewisePoly fitted(double (*f)(double), double period = 2 * pi) {
  return fit_periodic([f](double x) { return f(x); }, period);
}

}  // namespace

TEST_CASE("miura_forward of the step field") {
  const double alpha = 2.0;
  const MiuraField phi = step_miura_field(alpha, pi, 2 * pi);
  const PeriodicPotential q = miura_forward(phi, Partner::first);
  CHECK(q.q1() == doctest::Approx(alpha * alpha / 4));
  const auto atoms = q.atoms();
  REQUIRE(atoms.size() == 2);
  // The circle version carries the compensating jump at the cell boundary.
  CHECK(atoms[0].x == 0.0);
  CHECK(atoms[0].w == doctest::Approx(-alpha));
  CHECK(atoms[1].x == doctest::Approx(pi));
  CHECK(atoms[1].w == doctest::Approx(alpha));
  // Away from the jumps q = phi^2 - phi' = alpha^2 / 4.
  for (double x : {0.5, 2.0, 4.0}) CHECK(q.regular_density()(x) == doctest::Approx(alpha * alpha / 4));
}

TEST_CASE("miura_forward zero and cosine fields") {
  const PeriodicPotential z = miura_forward(MiuraField(PiecewisePoly::constant(2 * pi, 0.0)), Partner::first);
  CHECK(z.q1() == 0.0);
  CHECK(z.q2().max_abs() == 0.0);

  const MiuraField phi(fitted([](double x) { return std::cos(x); }));
  for (Partner sign : {Partner::first, Partner::second}) {
    const PeriodicPotential q = miura_forward(phi, sign);
    const double s = sign == Partner::first ? 1.0 : -1.0;
    CHECK(q.q1() == doctest::Approx(0.5).epsilon(1e-10));
    for (double x : {0.0, 0.7, 2.2, 3.9, 5.5}) {
      CHECK(q.q2()(x) == doctest::Approx(std::sin(2 * x) / 4 - s * std::cos(x)).epsilon(1e-9).scale(1.0));
      // q1 + q2' = phi^2 -/+ phi'
      const double v = std::cos(x) * std::cos(x) + s * std::sin(x);
      CHECK(q.regular_density()(x) == doctest::Approx(v).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("miura identity holds coefficientwise on random fields") {
  ldspec::testing::CoeffGen gen(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const double period = gen.uniform(1.0, 8.0);
    const MiuraField phi = gen.miura(period);
    for (Partner sign : {Partner::first, Partner::second}) {
      const double s = sign == Partner::first ? -1.0 : 1.0;
      const PeriodicPotential q = miura_forward(phi, sign);
      const PiecewisePoly target = phi.phi() * phi.phi() + s * phi.phi().derivative();
      const PiecewisePoly got = q.regular_density();
      const PiecewisePoly diff = (got - target).simplified();
      CHECK(diff.max_abs() < 1e-11 * (1.0 + target.max_abs()));
      // jumps of q2 are -/+ the jumps of phi
      for (std::size_t k = 0; k < phi.phi().size(); ++k) {
        const double x = phi.phi().piece_start(k);
        const double jq = q.q2().right_limit(x) - q.q2().left_limit(x);
        const double jp = phi.phi().right_limit(x) - phi.phi().left_limit(x);
        CHECK(jq == doctest::Approx(s * jp).epsilon(1e-11).scale(1.0));
      }
      CHECK(std::abs(q.q2().mean()) < 1e-12);
    }
  }
}

TEST_CASE("jordan_decompose") {
  SUBCASE("atoms") {
    const SignedWeight w(PiecewisePoly::constant(4.0, 0.0), {{1.0, 2.0}, {2.0, -3.0}});
    const auto [p, n] = jordan_decompose(w);
    CHECK(p.total_mass() == doctest::Approx(2.0));
    CHECK(n.total_mass() == doctest::Approx(3.0));
  }
  SUBCASE("nonnegative") {
    const SignedWeight w = SignedWeight::constant(3.0, 1.0);
    const auto [p, n] = jordan_decompose(w);
    CHECK(n.total_variation() == 0.0);
    CHECK(p == w);
  }
  SUBCASE("cosine density") {
    const SignedWeight w(fitted([](double x) { return std::cos(x); }));
    const auto [p, n] = jordan_decompose(w);
    CHECK(p.total_mass() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(n.total_mass() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(p.density()(1.0) > 0.0);
    CHECK(p.density()(2.0) == 0.0);
    CHECK(p.density()(5.0) > 0.0);
    CHECK(n.density()(3.0) > 0.0);
  }
  SUBCASE("random reassembly") {
    ldspec::testing::CoeffGen gen(77);
    for (int trial = 0; trial < 50; ++trial) {
      const double period = gen.uniform(1.0, 6.0);
      const SignedWeight w = gen.weight(period);
      const auto [p, n] = jordan_decompose(w);
      const PiecewisePoly diff = (p.density() - n.density() - w.density()).simplified();
      CHECK(diff.max_abs() < 1e-12);
      CHECK(p.total_mass() + n.total_mass() == doctest::Approx(w.total_variation()).epsilon(1e-12));
      for (double x : {0.1, 0.5, 0.9})
        CHECK(p.density()(x * period) * n.density()(x * period) == 0.0);
      CHECK(p.atoms().size() + n.atoms().size() == w.atoms().size());
    }
  }
}

TEST_CASE("loc_unif_seminorm") {
  CHECK(loc_unif_seminorm(PiecewisePoly::constant(2 * pi, 1.0), 1, 1.0) == doctest::Approx(1.0));
  CHECK(loc_unif_seminorm(PiecewisePoly::constant(2 * pi, 0.0), 2, 1.0) == 0.0);
  // Oracle: dense maximization of 1/2 + (sin(2a + 2) - sin(2a)) / 4.
  double best = -1.0;
  for (int i = 0; i < 200000; ++i) {
    const double a = 2 * pi * i / 200000;
    best = std::max(best, 0.5 + (std::sin(2 * a + 2) - std::sin(2 * a)) / 4);
  }
  const double got = loc_unif_seminorm(fitted([](double x) { return std::cos(x); }), 2, 1.0);
  CHECK(got == doctest::Approx(best).epsilon(1e-9));
  CHECK(got == doctest::Approx(0.5 + std::sin(1.0) / 2).epsilon(1e-9));
  CHECK_THROWS_AS(loc_unif_seminorm(PiecewisePoly::constant(1.0, 1.0), 3, 0.5), CoefficientError);
}

TEST_CASE("loc_unif_seminorm is translation invariant") {
  ldspec::testing::CoeffGen gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const double period = gen.uniform(1.0, 6.0);
    const PiecewisePoly f = gen.piecewise(period, 4, 3, 1.0);
    const double len = gen.uniform(0.1, 1.5) * period;
    const int p = gen.integer(1, 2);
    const double delta = gen.uniform(-period, period);
    const double a = loc_unif_seminorm(f, p, len);
    const double b = loc_unif_seminorm(f.shifted(delta), p, len);
    CHECK(b == doctest::Approx(a).epsilon(1e-10));
  }
}

TEST_CASE("yafaev_check") {
  CHECK(yafaev_check(PeriodicPotential::constant(2 * pi, 1.0), 1.0, 1.0));
  CHECK_FALSE(yafaev_check(PeriodicPotential::constant(2 * pi, 0.0), 0.7, 0.5));
  const PeriodicPotential q(0.0, fitted([](double x) { return std::sin(x); }));
  CHECK_FALSE(yafaev_check(q, 1.0, 0.1));
  CHECK(yafaev_infimum(q, 1.0) == doctest::Approx(-2 * std::sin(0.5)).epsilon(1e-9));
  const PeriodicPotential atom = build_model({"kronig_penney", {{"alpha", 1.0}}}).q;
  CHECK_THROWS_AS(yafaev_check(atom, 1.0, 0.1), CoefficientError);
}

TEST_CASE("yafaev affine shift") {
  ldspec::testing::CoeffGen gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    const double period = gen.uniform(1.0, 6.0);
    PiecewisePoly q2 = gen.piecewise(period, 3, 3, 1.0);
    // continuous q2 so that q has no atoms
    PiecewisePoly d = q2.derivative();
    d += -d.mean();
    q2 = d.primitive();
    const PeriodicPotential q(gen.uniform(-1.0, 1.0), q2);
    const double c = gen.uniform(-1.0, 1.0), a = gen.uniform(0.2, 2.0);
    const PeriodicPotential shifted(q.q1() + c, q.q2());
    const double inf = yafaev_infimum(q, a);
    CHECK(yafaev_infimum(shifted, a) == doctest::Approx(inf + c * a).epsilon(1e-10));
    const double c0 = inf + c * a - 1e-9;
    if (yafaev_check(q, a, c0 - c * a)) CHECK(yafaev_check(shifted, a, c0));
  }
}

TEST_CASE("build_model presets") {
  SUBCASE("constant") {
    const Model m = build_model({"constant", {{"q1", 1.0}, {"r1", 1.0}}});
    CHECK(m.q.q1() == 1.0);
    CHECK(m.q.q2().max_abs() == 0.0);
    CHECK(m.r.atoms().empty());
    CHECK(m.r.density()(1.0) == 1.0);
  }
  SUBCASE("kronig_penney") {
    const Model m = build_model({"kronig_penney", {{"alpha", 1.0}, {"omega", 2 * pi}}});
    const auto atoms = m.q.atoms();
    REQUIRE(atoms.size() == 1);
    CHECK(atoms[0].x == 0.0);
    CHECK(atoms[0].w == doctest::Approx(1.0));
    // periodic mean-zero gauge: the atom's mean sits in q1
    CHECK(m.q.q1() == doctest::Approx(1.0 / (2 * pi)));
    CHECK(m.q.regular_density()(1.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(m.r == SignedWeight::constant(2 * pi, 1.0));
  }
  SUBCASE("miura_step") {
    const Model m = build_model({"miura_step", {{"alpha", 2.0}, {"x0", pi}}});
    CHECK(m.q == miura_forward(step_miura_field(2.0, pi, 2 * pi), Partner::first));
    CHECK(m.q.q1() == doctest::Approx(1.0));
    REQUIRE(m.phi.has_value());
  }
  SUBCASE("ch_peakon") {
    const Model m = build_model({"ch_peakon", {{"amplitude", 1.0}}});
    REQUIRE(m.r.atoms().size() == 1);
    CHECK(m.r.atoms()[0].w == doctest::Approx(-2.0));
    // density -3 u with u the periodized exp(-|x|)
    for (double x : {0.5, 3.0, 5.9}) {
      double u = 0.0;
      for (int n = -40; n <= 40; ++n) u += std::exp(-std::abs(x - 2 * pi * n));
      CHECK(m.r.density()(x) == doctest::Approx(-3 * u).epsilon(1e-11));
    }
  }
  SUBCASE("step_weight") {
    const Model m = build_model({"step_weight", {}});
    CHECK(m.r.density()(1.0) == 1.0);
    CHECK(m.r.density()(4.0) == -1.0);
    CHECK(m.r.total_mass() == doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(build_model({"nope", {}}), CoefficientError);
    CHECK_THROWS_AS(build_model({"constant", {{"omega", -1.0}}}), CoefficientError);
    CHECK_THROWS_AS(build_model({"constant", {{"r1", 0.0}}}), CoefficientError);
    CHECK_THROWS_AS(build_model({"constant", {{"typo", 1.0}}}), CoefficientError);
    CHECK_THROWS_AS(build_model({"kronig_penney", {}}), CoefficientError);
  }
}

TEST_CASE("signed weight validation") {
  CHECK_THROWS_AS(SignedWeight(PiecewisePoly::constant(1.0, 0.0), {{0.2, 0.0}}), CoefficientError);
  CHECK_THROWS_AS(SignedWeight(PiecewisePoly::constant(1.0, 0.0), {{0.2, 1.0}, {1.2, 1.0}}), CoefficientError);
  const SignedWeight w(PiecewisePoly::constant(1.0, 0.5), {{1.25, 1.0}, {-0.5, -2.0}});
  CHECK(w.atoms()[0].x == doctest::Approx(0.25));
  CHECK(w.atoms()[1].x == doctest::Approx(0.5));
  CHECK(w.total_variation() == doctest::Approx(3.5));
  CHECK(w.total_mass() == doctest::Approx(-0.5));
  const PiecewisePoly saw = w.atom_primitive();
  CHECK(saw.jump(1) == doctest::Approx(1.0));
  CHECK(std::abs(saw.mean()) < 1e-15);
}
