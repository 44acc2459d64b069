#pragma once

// Dense real polynomials in ascending-coefficient form, p(t) = sum_j c[j] t^j.

#include <complex>
#include <span>
#include <vector>

namespace ldspec::poly {

using Poly = std::vector<double>;

double eval(std::span<const double> p, double t);
Poly derivative(std::span<const double> p);
// Antiderivative vanishing at t = 0.
Poly antiderivative(std::span<const double> p);
Poly add(std::span<const double> p, std::span<const double> q);
Poly sub(std::span<const double> p, std::span<const double> q);
Poly mul(std::span<const double> p, std::span<const double> q);
Poly scale(std::span<const double> p, double s);
// Coefficients of t -> p(t + s).
Poly shift(std::span<const double> p, double s);
// Coefficients of t -> p(h t).
Poly dilate(std::span<const double> p, double h);
// Drops trailing exact zeros; the zero polynomial becomes {}.
Poly trimmed(Poly p);
int degree(std::span<const double> p);
bool is_zero(std::span<const double> p);

// Real roots of p in [lo, hi], sorted ascending. Roots are isolated between
// critical points (found recursively) and refined by a bracketing solver.
// A polynomial that vanishes identically has no reported roots.
std::vector<double> roots_in(std::span<const double> p, double lo, double hi);

// Integral of p(t) exp(-i lambda (origin + t)) for t in [0, len], evaluated in
// closed form (power series for small |lambda| len, integration by parts
// otherwise, subdividing in between).
std::complex<double> fourier_integral(std::span<const double> p, double len, double origin, double lambda);

}  // namespace ldspec::poly
