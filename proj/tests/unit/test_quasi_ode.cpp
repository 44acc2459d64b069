#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ldspec/error.hpp"
#include "ldspec/quasi_ode.hpp"
#include "oracles.hpp"
#include "random_coeffs.hpp"

using namespace ldspec;
using namespace ldspec::testing;
constexpr double pi = std::numbers::pi;

TEST_CASE("assemble_system") {
  SUBCASE("constants") {
    const SystemSlice s = assemble_system(PeriodicPotential::constant(2 * pi, 1.0), SignedWeight::constant(2 * pi, 1.0), 2.0);
    CHECK(s.Q1(1.0) == cplx(-1.0));
    CHECK(s.Q2(1.0) == cplx(0.0));
    CHECK(s.breakpoints() == std::vector<double>{0.0});
    CHECK(s.piece_exact(0));
  }
  SUBCASE("kronig-penney") {
    const Model m = build_model({"kronig_penney", {{"alpha", 1.0}, {"x0", 2.0}}});
    const SystemSlice s = assemble_system(m.q, m.r, 0.0);
    CHECK(std::abs(s.Q2_right(2.0) - s.Q2(2.0) - 1.0) < 1e-14);
    // distributional density away from the atom: Q1 + Q2' = 0
    CHECK(std::abs(s.Q1(1.0) + poly::eval(poly::derivative(s.q2_piece(0)), 0.3)) < 1e-15);
  }
  SUBCASE("weight atom") {
    const double w = 0.75, x0 = 1.5;
    const SignedWeight r(PiecewisePoly::constant(4.0, 1.0), {{x0, w}});
    const SystemSlice s = assemble_system(PeriodicPotential::constant(4.0, 1.0), r, 3.0);
    CHECK(std::abs(s.Q2_right(x0) - s.Q2(x0) - (-3.0 * w)) < 1e-14);
  }
}

TEST_CASE("integrate closed forms") {
  const double tol = 1e-10;
  SUBCASE("free sine") {
    const SystemSlice s = assemble_system(PeriodicPotential::constant(2 * pi, 0.0), SignedWeight::constant(2 * pi, 1.0), 1.0);
    const QuasiState e = integrate(s, {0.0, 0.0, 1.0}, pi, tol);
    CHECK(std::abs(e.y) < 1e-9);
    CHECK(std::abs(e.yq + 1.0) < 1e-9);
    const QuasiState back = integrate(s, e, 0.0, tol);
    CHECK(std::abs(back.y) < 1e-9);
    CHECK(std::abs(back.yq - 1.0) < 1e-9);
  }
  SUBCASE("double zero") {
    const SystemSlice s = assemble_system(PeriodicPotential::constant(2 * pi, 1.0), SignedWeight::constant(2 * pi, 1.0), 1.0);
    const QuasiState e = integrate(s, {0.0, 1.0, 0.0}, 1.0, tol);
    CHECK(std::abs(e.y - 1.0) < 1e-12);
    CHECK(std::abs(e.yq) < 1e-12);
    const QuasiState l = integrate(s, {0.0, 1.0, 2.0}, 3.0, tol);
    CHECK(std::abs(l.y - 7.0) < 1e-12);
  }
  SUBCASE("atom: y continuous, y' jumps by alpha y") {
    const double x0 = 2.0, eps = 1e-3;
    const Model m = build_model({"kronig_penney", {{"alpha", 1.0}, {"x0", x0}}});
    const SystemSlice s = assemble_system(m.q, m.r, 0.0);
    const QuasiState start{x0 - eps, 1.0, 0.0};
    const QuasiState at = integrate(s, start, x0, tol);
    const QuasiState after = integrate(s, at, x0 + 1e-12, tol);
    CHECK(std::abs(after.y - at.y) < 1e-11);
    CHECK(std::abs(after.yq - at.yq) < 1e-11);
    const cplx left = classical_derivative(s, at);
    const cplx right = at.yq + s.Q2_right(x0) * at.y;
    CHECK(std::abs(right - left - at.y) < 1e-12);
  }
  SUBCASE("errors") {
    const SystemSlice s = assemble_system(PeriodicPotential::constant(1.0, 0.0), SignedWeight::constant(1.0, 1.0), -1e8);
    CHECK_THROWS_AS(integrate(s, {0.0, 1.0, 0.0}, 1.0, tol), IntegrationError);
    CHECK_THROWS_AS(integrate(s, {0.0, 1.0, 0.0}, 1.0, -1.0), IntegrationError);
  }
}

TEST_CASE("solution_basis") {
  SUBCASE("free case") {
    const double k = 1.7;
    const SystemSlice s = assemble_system(PeriodicPotential::constant(2 * pi, 0.0), SignedWeight::constant(2 * pi, 1.0), k * k);
    const std::vector<double> grid{0.5, 1.0, 3.3, 6.0};
    const SolutionBasis b = solution_basis(s, 0.0, 1e-10, grid);
    REQUIRE(b.u1.size() == 6);
    for (std::size_t i = 0; i < b.u1.size(); ++i) {
      const double x = b.u1[i].x;
      CHECK(std::abs(b.u1[i].y - std::cos(k * x)) < 1e-9);
      CHECK(std::abs(b.u2[i].y - std::sin(k * x) / k) < 1e-9);
      CHECK(std::abs(b.u2[i].yq - std::cos(k * x)) < 1e-9);
    }
  }
  SUBCASE("double zero") {
    const SystemSlice s = assemble_system(PeriodicPotential::constant(3.0, 2.0), SignedWeight::constant(3.0, 1.0), 2.0);
    const SolutionBasis b = solution_basis(s, 0.0);
    for (const auto& st : b.u1) CHECK(std::abs(st.y - 1.0) < 1e-14);
    for (const auto& st : b.u2) CHECK(std::abs(st.y - st.x) < 1e-13);
  }
  SUBCASE("kronig-penney transfer matrices") {
    const double alpha = 1.3, x0 = 2.5, omega = 2 * pi, k = 1.1;
    const Model m = build_model({"kronig_penney", {{"alpha", alpha}, {"x0", x0}}});
    const SystemSlice s = assemble_system(m.q, m.r, k * k);
    const std::vector<double> grid{1.0, 4.0};
    const SolutionBasis b = solution_basis(s, 0.0, 1e-10, grid);
    // classical (y, y') at 0 from the quasi initial data
    const double q20 = m.q.q2()(0.0);
    for (std::size_t i = 0; i < b.u1.size(); ++i) {
      const double x = b.u1[i].x;
      C2 T = free_evolution(-k * k, std::min(x, x0));
      if (x > x0) T = mul2(free_evolution(-k * k, x - x0), mul2(delta_jump(alpha), T));
      // u1: y = 1, y' = q2(0); u2: y = 0, y' = 1
      const cplx u1 = T[0] + T[1] * q20;
      const cplx u2 = T[1];
      CHECK(std::abs(b.u1[i].y - u1) < 1e-9);
      CHECK(std::abs(b.u2[i].y - u2) < 1e-9);
    }
  }
}

TEST_CASE("wronskian") {
  const SystemSlice s = assemble_system(PeriodicPotential::constant(2 * pi, 0.0), SignedWeight::constant(2 * pi, 1.0), 1.0);
  const std::vector<double> grid{pi / 2};
  const SolutionBasis b = solution_basis(s, 0.0, 1e-10, grid);
  CHECK(std::abs(wronskian(b.u1.front(), b.u2.front()) - 1.0) < 1e-15);
  CHECK(std::abs(wronskian(b.u1[1], b.u1[1])) == 0.0);
  REQUIRE(b.u1[1].x == doctest::Approx(pi / 2));
  CHECK(std::abs(wronskian(b.u1[1], b.u2[1]) - 1.0) < 1e-10);
}

TEST_CASE("linearity, realness and continuity on random coefficients") {
  CoeffGen gen(31);
  const double tol = 1e-10;
  for (int trial = 0; trial < 50; ++trial) {
    const double period = gen.uniform(1.0, 6.0);
    const PeriodicPotential q = gen.potential(period);
    const SignedWeight r = gen.weight(period);
    const double z = gen.uniform(-3.0, 10.0);
    const SystemSlice s = assemble_system(q, r, z);
    const double to = gen.uniform(0.2, 2.0) * period;
    const QuasiState a{0.0, gen.uniform(-1, 1), gen.uniform(-1, 1)};
    const QuasiState b{0.0, gen.uniform(-1, 1), gen.uniform(-1, 1)};
    const double ca = gen.uniform(-2, 2), cb = gen.uniform(-2, 2);
    const QuasiState ea = integrate(s, a, to, tol);
    const QuasiState eb = integrate(s, b, to, tol);
    const QuasiState ec = integrate(s, {0.0, ca * a.y + cb * b.y, ca * a.yq + cb * b.yq}, to, tol);
    const double scale = 1.0 + std::abs(ea.y) + std::abs(eb.y) + std::abs(ea.yq) + std::abs(eb.yq);
    CHECK(std::abs(ec.y - ca * ea.y - cb * eb.y) < 1e-8 * scale);
    CHECK(std::abs(ec.yq - ca * ea.yq - cb * eb.yq) < 1e-8 * scale);
    CHECK(std::abs(ea.y.imag()) <= 10 * tol);
    CHECK(std::abs(ea.yq.imag()) <= 10 * tol);
    // Stopping at each breakpoint and restarting gives the same state.
    QuasiState st = a;
    for (double x : s.breakpoints())
      if (x > 0.0) st = integrate(s, st, x, tol);
    st = integrate(s, st, period, tol);
    const QuasiState direct = integrate(s, a, period, tol);
    CHECK(std::abs(st.y - direct.y) < 1e-8 * (1.0 + std::abs(direct.y)));
  }
}
