#pragma once

#include <functional>
#include <span>

#include "ldspec/piecewise.hpp"

namespace ldspec {

struct FitOptions {
  double tol = 1e-10;   // max absolute error on the check grid
  int degree = 7;       // polynomial degree per piece
  int max_depth = 24;   // bisection depth limit per knot interval
};

// Adaptive piecewise Chebyshev interpolation of a periodic function on
// [0, period). `knots` are forced breakpoints (known discontinuities); the
// function is only sampled strictly inside each knot interval.
PiecewisePoly fit_periodic(const std::function<double(double)>& f, double period, const FitOptions& opts = {},
                           std::span<const double> knots = {});

}  // namespace ldspec
