#include "ldspec/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldspec/error.hpp"

namespace ldspec {

namespace {

// Interpolant through first-kind Chebyshev nodes on [a, a + len], returned in
// the local coordinate t = x - a.
poly::Poly chebyshev_interpolant(const std::function<double(double)>& f, double a, double len, int degree) {
  const int n = degree + 1;
  std::vector<double> values(n), nodes(n);
  for (int j = 0; j < n; ++j) {
    nodes[j] = std::cos(std::numbers::pi * (j + 0.5) / n);
    values[j] = f(a + 0.5 * len * (nodes[j] + 1.0));
  }
  // Chebyshev coefficients by the discrete orthogonality relation.
  std::vector<double> cheb(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += values[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
    cheb[k] = (k == 0 ? 1.0 : 2.0) * acc / n;
  }
  // Monomial form in s in [-1, 1] via T_{k+1} = 2 s T_k - T_{k-1}.
  poly::Poly mono(n, 0.0);
  poly::Poly tkm1{1.0}, tk{0.0, 1.0};
  mono[0] += cheb[0];
  if (n > 1) mono[1] += cheb[1];
  for (int k = 2; k < n; ++k) {
    poly::Poly next = poly::sub(poly::mul(poly::Poly{0.0, 2.0}, tk), tkm1);
    for (std::size_t j = 0; j < next.size(); ++j) mono[j] += cheb[k] * next[j];
    tkm1 = std::move(tk);
    tk = std::move(next);
  }
  // s = 2 t / len - 1.
  return poly::dilate(poly::shift(mono, -1.0), 2.0 / len);
}

void fit_interval(const std::function<double(double)>& f, double a, double len, const FitOptions& opts, int depth,
                  std::vector<double>& breaks, std::vector<poly::Poly>& pieces) {
  poly::Poly p = chebyshev_interpolant(f, a, len, opts.degree);
  const int checks = 4 * (opts.degree + 1);
  double err = 0.0;
  for (int i = 0; i < checks; ++i) {
    const double t = len * (i + 0.5) / checks;
    const double v = f(a + t);
    if (!std::isfinite(v)) throw CoefficientError("fitted function is not finite at x = " + std::to_string(a + t));
    err = std::max(err, std::abs(v - poly::eval(p, t)));
  }
  if (err <= opts.tol || depth >= opts.max_depth) {
    if (err > opts.tol)
      throw CoefficientError("piecewise fit did not reach tolerance near x = " + std::to_string(a));
    breaks.push_back(a);
    pieces.push_back(std::move(p));
    return;
  }
  const double h = 0.5 * len;
  fit_interval(f, a, h, opts, depth + 1, breaks, pieces);
  fit_interval(f, a + h, h, opts, depth + 1, breaks, pieces);
}

}  // namespace

PiecewisePoly fit_periodic(const std::function<double(double)>& f, double period, const FitOptions& opts,
                           std::span<const double> knots) {
  if (!(period > 0.0)) throw CoefficientError("period must be positive");
  std::vector<double> k{0.0};
  for (double x : knots) {
    const double r = x - std::floor(x / period) * period;
    if (r > 0.0 && r < period) k.push_back(r);
  }
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  k.push_back(period);

  std::vector<double> breaks;
  std::vector<poly::Poly> pieces;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const double len = k[i + 1] - k[i];
    // Start from pieces of length at most period/8 so that the first
    // interpolant already resolves a few oscillations.
    const int parts = std::max(1, static_cast<int>(std::ceil(8.0 * len / period)));
    for (int j = 0; j < parts; ++j)
      fit_interval(f, k[i] + j * len / parts, len / parts, opts, 0, breaks, pieces);
  }
  return PiecewisePoly(period, std::move(breaks), std::move(pieces));
}

}  // namespace ldspec
