#include "ldspec/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

namespace ldspec::poly {

double eval(std::span<const double> p, double t) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Poly derivative(std::span<const double> p) {
  if (p.size() <= 1) return {};
  Poly d(p.size() - 1);
  for (std::size_t j = 1; j < p.size(); ++j) d[j - 1] = static_cast<double>(j) * p[j];
  return d;
}

Poly antiderivative(std::span<const double> p) {
  Poly a(p.size() + 1, 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) a[j + 1] = p[j] / static_cast<double>(j + 1);
  return a;
}

Poly add(std::span<const double> p, std::span<const double> q) {
  Poly r(std::max(p.size(), q.size()), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) r[j] += p[j];
  for (std::size_t j = 0; j < q.size(); ++j) r[j] += q[j];
  return r;
}

Poly sub(std::span<const double> p, std::span<const double> q) {
  Poly r(std::max(p.size(), q.size()), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) r[j] += p[j];
  for (std::size_t j = 0; j < q.size(); ++j) r[j] -= q[j];
  return r;
}

Poly mul(std::span<const double> p, std::span<const double> q) {
  if (p.empty() || q.empty()) return {};
  Poly r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

Poly scale(std::span<const double> p, double s) {
  Poly r(p.begin(), p.end());
  for (double& c : r) c *= s;
  return r;
}

Poly shift(std::span<const double> p, double s) {
  // Repeated synthetic division (Horner's scheme for the Taylor expansion).
  Poly r(p.begin(), p.end());
  const std::size_t n = r.size();
  if (s == 0.0 || n <= 1) return r;
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (std::size_t j = n - 1; j > k; --j) r[j - 1] += s * r[j];
  return r;
}

Poly dilate(std::span<const double> p, double h) {
  Poly r(p.begin(), p.end());
  double hp = 1.0;
  for (double& c : r) {
    c *= hp;
    hp *= h;
  }
  return r;
}

Poly trimmed(Poly p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  return p;
}

int degree(std::span<const double> p) {
  for (std::size_t j = p.size(); j > 0; --j)
    if (p[j - 1] != 0.0) return static_cast<int>(j - 1);
  return -1;
}

bool is_zero(std::span<const double> p) { return degree(p) < 0; }

std::vector<double> roots_in(std::span<const double> p, double lo, double hi) {
  std::vector<double> out;
  const int deg = degree(p);
  if (deg <= 0 || !(hi >= lo)) return out;
  if (deg == 1) {
    const double t = -p[0] / p[1];
    if (t >= lo && t <= hi) out.push_back(t);
    return out;
  }

  std::vector<double> knots{lo};
  for (double c : roots_in(derivative(p.first(static_cast<std::size_t>(deg) + 1)), lo, hi))
    if (c > knots.back()) knots.push_back(c);
  if (hi > knots.back()) knots.push_back(hi);

  auto f = [&](double t) { return eval(p, t); };
  auto push = [&](double t) {
    if (out.empty() || t - out.back() > 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(t)))
      out.push_back(t);
  };
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k], b = knots[k + 1];
    const double fa = f(a), fb = f(b);
    if (fa == 0.0) {
      push(a);
      continue;
    }
    if (fa * fb < 0.0) {
      boost::uintmax_t iters = 200;
      auto [x0, x1] = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
      push(0.5 * (x0 + x1));
    }
  }
  if (f(hi) == 0.0) push(hi);
  return out;
}

namespace {

using cplx = std::complex<double>;

// J_j(mu) = int_{-1}^{1} s^j exp(-i mu s) ds for j = 0..n-1.
std::vector<cplx> centered_moments(std::size_t n, double mu) {
  std::vector<cplx> J(n);
  if (std::abs(mu) <= 1.0) {
    // Series in mu; only terms with j + k even survive.
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      cplx term = 1.0;  // (-i mu)^k / k!
      for (std::size_t k = 0; k < 60; ++k) {
        if ((j + k) % 2 == 0) acc += term * (2.0 / static_cast<double>(j + k + 1));
        term *= cplx(0.0, -mu) / static_cast<double>(k + 1);
        if (std::abs(term) < 1e-19 * (1.0 + std::abs(acc))) break;
      }
      J[j] = acc;
    }
    return J;
  }
  const cplx e_minus = std::exp(cplx(0.0, -mu));
  const cplx e_plus = std::conj(e_minus);
  const cplx inv = 1.0 / cplx(0.0, -mu);
  J[0] = 2.0 * std::sin(mu) / mu;
  double sign = -1.0;  // (-1)^j
  for (std::size_t j = 1; j < n; ++j) {
    J[j] = (e_minus - sign * e_plus) * inv - static_cast<double>(j) * inv * J[j - 1];
    sign = -sign;
  }
  return J;
}

cplx fourier_rec(std::span<const double> p, double len, double origin, double lambda, int depth) {
  const int deg = degree(p);
  if (deg < 0 || len <= 0.0) return 0.0;
  const double h = 0.5 * len;
  const double mu = lambda * h;
  const double needed = static_cast<double>(deg + 1);
  if (std::abs(mu) > 1.0 && std::abs(mu) < needed && depth < 40) {
    const Poly right = shift(p.first(static_cast<std::size_t>(deg) + 1), h);
    return fourier_rec(p, h, origin, lambda, depth + 1) + fourier_rec(right, h, origin + h, lambda, depth + 1);
  }
  // Re-expand about the midpoint in the unit variable s, t = h (1 + s).
  const Poly centered = dilate(shift(p.first(static_cast<std::size_t>(deg) + 1), h), h);
  const auto J = centered_moments(centered.size(), mu);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < centered.size(); ++j) acc += centered[j] * J[j];
  return h * std::exp(cplx(0.0, -lambda * (origin + h))) * acc;
}

}  // namespace

std::complex<double> fourier_integral(std::span<const double> p, double len, double origin, double lambda) {
  return fourier_rec(p, len, origin, lambda, 0);
}

}  // namespace ldspec::poly
