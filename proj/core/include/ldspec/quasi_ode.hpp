#pragma once

// First-order quasi-derivative system
//
//   (y, y^[1])' = [[Q2, 1], [Q1 - Q2^2, -Q2]] (y, y^[1]),   y^[1] = y' - Q2 y,
//
// with Q1 = q1 - z r1 and Q2 = q2 - z r2, where r1 is the density of the
// weight plus the mean of its atoms and r2 the mean-zero sawtooth primitive
// of the atoms. Atoms of q and r enter only as jumps of Q2, across which the
// state (y, y^[1]) is continuous.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "ldspec/coefficients.hpp"

namespace ldspec {

using cplx = std::complex<double>;

struct QuasiState {
  double x = 0.0;
  cplx y = 0.0;
  cplx yq = 0.0;  // quasi-derivative y^[1]
};

// Row-major 2x2 complex matrix {m00, m01, m10, m11}.
using Mat2 = std::array<cplx, 4>;

Mat2 mat_mul(const Mat2& a, const Mat2& b);
inline constexpr Mat2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }

class SystemSlice {
 public:
  SystemSlice(const PeriodicPotential& q, const SignedWeight& r, cplx z);

  cplx z() const { return z_; }
  double period() const { return q2_.period(); }
  // Merged breakpoints of every coefficient on [0, period).
  const std::vector<double>& breakpoints() const { return q2_.breaks(); }
  std::size_t piece_count() const { return q2_.size(); }

  // Left limits (the coefficients are left-continuous).
  cplx Q1(double x) const;
  cplx Q2(double x) const;
  cplx Q2_right(double x) const;

  // Real coefficient polynomials of piece k in its local coordinate.
  const poly::Poly& q1_piece(std::size_t k) const { return q1_.piece(k); }
  const poly::Poly& r1_piece(std::size_t k) const { return r1_.piece(k); }
  const poly::Poly& q2_piece(std::size_t k) const { return q2_.piece(k); }
  const poly::Poly& r2_piece(std::size_t k) const { return r2_.piece(k); }
  // True when q1, r1 are constant and q2, r2 at most linear on piece k, so
  // that Q1 + Q2' is constant there and the propagator is known exactly.
  bool piece_exact(std::size_t k) const { return exact_[k]; }
  const PiecewisePoly& layout() const { return q2_; }

  // Coefficient scale used for initial step sizes.
  double stiffness_scale() const { return scale_; }

 private:
  cplx z_;
  PiecewisePoly q1_, r1_, q2_, r2_;
  std::vector<bool> exact_;
  double scale_ = 1.0;
};

SystemSlice assemble_system(const PeriodicPotential& q, const SignedWeight& r, cplx z);

// Propagates (y, y^[1]) from `from.x` to `to_x` (either direction) with local
// relative tolerance `tol`. Throws IntegrationError on step-size underflow or
// a non-finite state.
QuasiState integrate(const SystemSlice& slice, const QuasiState& from, double to_x, double tol = 1e-10);

struct Transfer {
  Mat2 m = identity2();   // fundamental matrix, columns are solutions
  Mat2 dm = {};           // its derivative with respect to z (if requested)
  double det_residual = 0.0;  // |det m - 1|, evaluated before rounding m to double
};

// Fundamental matrix from `from` to `to` with the basis normalized to the
// identity at `from`.
Transfer propagate(const SystemSlice& slice, double from, double to, double tol = 1e-10, bool z_derivative = false);

using Trajectory = std::vector<QuasiState>;

struct SolutionBasis {
  Trajectory u1;  // u1(c) = 1, u1^[1](c) = 0
  Trajectory u2;  // u2(c) = 0, u2^[1](c) = 1
};

// Standard basis over [c, c + period], sampled at every breakpoint, at the
// absolute positions in `grid` that fall inside, and at both ends.
SolutionBasis solution_basis(const SystemSlice& slice, double c, double tol = 1e-10, std::span<const double> grid = {});

cplx wronskian(const QuasiState& f, const QuasiState& g);

// Classical derivative y' = y^[1] + Q2 y using the left limit of Q2.
cplx classical_derivative(const SystemSlice& slice, const QuasiState& s);

}  // namespace ldspec
