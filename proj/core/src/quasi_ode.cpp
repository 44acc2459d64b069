#include "ldspec/quasi_ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ldspec/error.hpp"

namespace ldspec {

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

namespace {

Mat2 mat_add(const Mat2& a, const Mat2& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

// SystemSlice

SystemSlice::SystemSlice(const PeriodicPotential& q, const SignedWeight& r, cplx z) : z_(z) {
  if (std::abs(q.period() - r.period()) > 1e-12 * q.period())
    throw CoefficientError("potential and weight have different periods");
  if (!finite(z)) throw IntegrationError("spectral parameter is not finite");
  const PiecewisePoly q1f = PiecewisePoly::constant(q.period(), q.q1());
  const PiecewisePoly r1f = r.regular_part();
  const PiecewisePoly r2f = r.atom_primitive();
  std::vector<double> b = merged_breaks(q.q2(), r1f);
  b.insert(b.end(), r2f.breaks().begin(), r2f.breaks().end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  q2_ = q.q2().refined(b);
  q1_ = q1f.refined(q2_.breaks());
  r1_ = r1f.refined(q2_.breaks());
  r2_ = r2f.refined(q2_.breaks());
  exact_.resize(q2_.size());
  double scale = 0.0;
  for (std::size_t k = 0; k < q2_.size(); ++k) {
    exact_[k] = poly::degree(q1_.piece(k)) <= 0 && poly::degree(r1_.piece(k)) <= 0 &&
                poly::degree(q2_.piece(k)) <= 1 && poly::degree(r2_.piece(k)) <= 1;
    const double x = q2_.piece_start(k);
    scale = std::max(scale, std::abs(Q1(x)) + std::norm(Q2(x)));
    scale = std::max(scale, std::abs(Q1(q2_.piece_end(k))) + std::norm(Q2(q2_.piece_end(k))));
  }
  scale_ = scale;
}

cplx SystemSlice::Q1(double x) const { return q1_.left_limit(x) - z_ * r1_.left_limit(x); }
cplx SystemSlice::Q2(double x) const { return q2_.left_limit(x) - z_ * r2_.left_limit(x); }
cplx SystemSlice::Q2_right(double x) const { return q2_.right_limit(x) - z_ * r2_.right_limit(x); }

SystemSlice assemble_system(const PeriodicPotential& q, const SignedWeight& r, cplx z) { return SystemSlice(q, r, z); }

namespace {

// Coefficients of piece k at local coordinate t.
struct Coeffs {
  cplx Q1, Q2;
  double r1, r2;
};

Coeffs coeffs_at(const SystemSlice& s, std::size_t k, double t) {
  const double r1 = poly::eval(s.r1_piece(k), t);
  const double r2 = poly::eval(s.r2_piece(k), t);
  return {poly::eval(s.q1_piece(k), t) - s.z() * r1, poly::eval(s.q2_piece(k), t) - s.z() * r2, r1, r2};
}

Mat2 system_matrix(const Coeffs& c) { return {c.Q2, 1.0, c.Q1 - c.Q2 * c.Q2, -c.Q2}; }

// d/dz of the system matrix.
Mat2 system_matrix_dz(const Coeffs& c) { return {-c.r2, 0.0, -c.r1 + 2.0 * c.Q2 * c.r2, c.r2}; }

using lcplx = std::complex<long double>;
using Mat2L = std::array<lcplx, 4>;

Mat2L widen(const Mat2& a) { return {lcplx(a[0]), lcplx(a[1]), lcplx(a[2]), lcplx(a[3])}; }
Mat2 narrow(const Mat2L& a) { return {cplx(a[0]), cplx(a[1]), cplx(a[2]), cplx(a[3])}; }

Mat2L mul(const Mat2L& a, const Mat2L& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

Mat2L add(const Mat2L& a, const Mat2L& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

long double coef(const poly::Poly& p, std::size_t i) { return i < p.size() ? p[i] : 0.0L; }

struct ExactStep {
  Mat2L m;
  Mat2L dm;
};

// Propagator over [t0, t1] of a piece where Q1 + Q2' = lambda is constant.
// The classical pair (y, y') evolves by [[C, S], [lambda S, C]] with
// C = cosh(h sqrt(lambda)), S = sinh(h sqrt(lambda)) / sqrt(lambda), and
// y^[1] = y' - Q2 y converts at both ends.
ExactStep exact_step(const SystemSlice& s, std::size_t k, double t0, double t1, bool z_derivative) {
  const lcplx z(s.z());
  const auto& q1 = s.q1_piece(k);
  const auto& r1 = s.r1_piece(k);
  const auto& q2 = s.q2_piece(k);
  const auto& r2 = s.r2_piece(k);
  const long double h = static_cast<long double>(t1) - t0;
  const long double r2a = coef(r2, 0) + coef(r2, 1) * t0;
  const long double r2b = coef(r2, 0) + coef(r2, 1) * t1;
  const lcplx lam = coef(q1, 0) + coef(q2, 1) - z * (coef(r1, 0) + coef(r2, 1));
  const lcplx Qa = coef(q2, 0) + coef(q2, 1) * t0 - z * r2a;
  const lcplx Qb = coef(q2, 0) + coef(q2, 1) * t1 - z * r2b;

  lcplx C, S, dS;  // dS = dS/dlambda
  const lcplx x = h * h * lam;
  if (std::abs(x) < 1.0L) {
    // C = sum x^k/(2k)!, S = h sum x^k/(2k+1)!, dS = h^3 sum (k+1) x^k/(2k+3)!.
    C = S = dS = 0.0L;
    lcplx pw = 1.0L;
    long double f2k = 1.0L, f2k1 = 1.0L;
    for (int j = 0; j < 24; ++j) {
      C += pw / f2k;
      S += pw / f2k1;
      f2k = f2k1 * (2 * j + 2);
      f2k1 = f2k * (2 * j + 3);
      dS += static_cast<long double>(j + 1) * pw / f2k1;
      pw *= x;
    }
    S *= h;
    dS *= h * h * h;
  } else {
    const lcplx sq = std::sqrt(lam);
    C = std::cosh(h * sq);
    S = std::sinh(h * sq) / sq;
    dS = (h * C - S) / (2.0L * lam);
  }
  ExactStep out;
  const lcplx top = C + S * Qa;
  out.m = {top, S, lam * S + C * Qa - Qb * top, C - Qb * S};
  if (z_derivative) {
    const long double lam_z = -(coef(r1, 0) + coef(r2, 1));
    const lcplx Cz = 0.5L * h * S * lam_z;
    const lcplx Sz = dS * lam_z;
    const lcplx top_z = Cz + Sz * Qa - S * r2a;
    out.dm = {top_z, Sz, lam_z * S + lam * Sz + Cz * Qa - C * r2a + r2b * top - Qb * top_z, Cz + r2b * S - Qb * Sz};
  }
  for (const auto& v : out.m)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw IntegrationError("non-finite propagator (|z| too large for the period?)");
  return out;
}

// Dormand-Prince 5(4) with a local relative error test.
template <std::size_t N, class Rhs>
class DormandPrince {
 public:
  using Vec = std::array<cplx, N>;

  DormandPrince(Rhs rhs, double tol) : rhs_(std::move(rhs)), tol_(tol) {}

  // Integrates from t0 to t1 (either direction), starting with |h| = h_hint.
  Vec run(Vec y, double t0, double t1, double& h_hint) {
    const double span = t1 - t0;
    if (span == 0.0) return y;
    const double dir = span > 0 ? 1.0 : -1.0;
    double t = t0;
    double h = std::min(std::abs(h_hint), std::abs(span)) * dir;
    Vec k1 = rhs_(t, y);
    std::size_t steps = 0;
    while (dir * (t1 - t) > 0.0) {
      if (++steps > 50'000'000) throw IntegrationError("step budget exhausted");
      bool last = false;
      if (dir * (t + h - t1) >= 0.0) {
        h = t1 - t;
        last = true;
      }
      const double tiny = 1e-14 * (1.0 + std::abs(t));
      if (std::abs(h) < tiny && !last) throw IntegrationError("step size underflow at x = " + std::to_string(t));

      Vec k2 = rhs_(t + c2 * h, lin(y, h, {a21}, {&k1}));
      Vec k3 = rhs_(t + c3 * h, lin(y, h, {a31, a32}, {&k1, &k2}));
      Vec k4 = rhs_(t + c4 * h, lin(y, h, {a41, a42, a43}, {&k1, &k2, &k3}));
      Vec k5 = rhs_(t + c5 * h, lin(y, h, {a51, a52, a53, a54}, {&k1, &k2, &k3, &k4}));
      Vec k6 = rhs_(t + h, lin(y, h, {a61, a62, a63, a64, a65}, {&k1, &k2, &k3, &k4, &k5}));
      Vec y5 = lin(y, h, {b1, 0.0, b3, b4, b5, b6}, {&k1, &k2, &k3, &k4, &k5, &k6});
      Vec k7 = rhs_(t + h, y5);

      double err = 0.0, ymax = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        err = std::max(err, std::abs(e));
        ymax = std::max({ymax, std::abs(y[i]), std::abs(y5[i])});
      }
      if (!std::isfinite(err) || !std::isfinite(ymax))
        throw IntegrationError("non-finite state at x = " + std::to_string(t));
      const double ratio = err / (tol_ * std::max(ymax, 1e-300));
      if (ratio <= 1.0) {
        t = last ? t1 : t + h;
        y = y5;
        k1 = k7;
        h_hint = std::abs(h);
        const double grow = ratio == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(ratio, -0.2));
        if (!last) h *= std::max(1.0, grow);
      } else {
        h *= std::max(0.1, 0.9 * std::pow(ratio, -0.25));
      }
    }
    return y;
  }

 private:
  Vec lin(const Vec& y, double h, std::initializer_list<double> a, std::initializer_list<const Vec*> k) const {
    Vec out = y;
    auto ai = a.begin();
    for (const Vec* kv : k) {
      const double c = *ai++;
      if (c != 0.0)
        for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*kv)[i];
    }
    return out;
  }

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  // Difference between the 5th and embedded 4th order weights.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  Rhs rhs_;
  double tol_;
};

// Calls visit(k, t_begin, t_end) for each piece traversed from `from` to
// `to`, in order, with local coordinates of piece k.
template <class Visit>
void walk(const SystemSlice& s, double from, double to, Visit visit) {
  if (from == to) return;
  const PiecewisePoly& lay = s.layout();
  const double period = s.period();
  double m = std::floor(from / period);
  double r = from - m * period;
  if (r >= period) {
    r = 0.0;
    m += 1.0;
  }
  std::size_t k = lay.locate(r);
  if (to > from) {
    double cur = from;
    while (cur < to) {
      const double base = m * period + lay.piece_start(k);
      const double end = std::min(to, m * period + lay.piece_end(k));
      if (end > cur) visit(k, cur - base, end - base);
      cur = end;
      if (++k == lay.size()) {
        k = 0;
        m += 1.0;
      }
    }
  } else {
    if (r == lay.piece_start(k)) {
      if (k == 0) {
        k = lay.size() - 1;
        m -= 1.0;
      } else {
        --k;
      }
    }
    double cur = from;
    while (cur > to) {
      const double base = m * period + lay.piece_start(k);
      const double start = std::max(to, base);
      if (start < cur) visit(k, cur - base, start - base);
      cur = start;
      if (k == 0) {
        k = lay.size() - 1;
        m -= 1.0;
      } else {
        --k;
      }
    }
  }
}

double initial_step(const SystemSlice& s) { return 0.25 / (1.0 + std::sqrt(s.stiffness_scale())); }

}  // namespace

QuasiState integrate(const SystemSlice& slice, const QuasiState& from, double to_x, double tol) {
  if (!(tol > 0.0)) throw IntegrationError("tolerance must be positive");
  std::array<cplx, 2> v{from.y, from.yq};
  double h = initial_step(slice);
  walk(slice, from.x, to_x, [&](std::size_t k, double t0, double t1) {
    if (slice.piece_exact(k)) {
      const Mat2 e = narrow(exact_step(slice, k, t0, t1, false).m);
      v = {e[0] * v[0] + e[1] * v[1], e[2] * v[0] + e[3] * v[1]};
      return;
    }
    auto rhs = [&](double t, const std::array<cplx, 2>& y) {
      const Mat2 A = system_matrix(coeffs_at(slice, k, t));
      return std::array<cplx, 2>{A[0] * y[0] + A[1] * y[1], A[2] * y[0] + A[3] * y[1]};
    };
    v = DormandPrince<2, decltype(rhs)>(rhs, tol).run(v, t0, t1, h);
  });
  if (!finite(v[0]) || !finite(v[1])) throw IntegrationError("non-finite state");
  return {to_x, v[0], v[1]};
}

namespace {

// Piece propagators are accumulated in extended precision.
ExactStep propagate_long(const SystemSlice& slice, double from, double to, double tol, bool z_derivative) {
  if (!(tol > 0.0)) throw IntegrationError("tolerance must be positive");
  Mat2L acc{1.0L, 0.0L, 0.0L, 1.0L};
  Mat2L dacc{};
  double h = initial_step(slice);
  walk(slice, from, to, [&](std::size_t k, double t0, double t1) {
    ExactStep e;
    if (slice.piece_exact(k)) {
      e = exact_step(slice, k, t0, t1, z_derivative);
    } else if (!z_derivative) {
      auto rhs = [&](double t, const std::array<cplx, 4>& y) {
        return mat_mul(system_matrix(coeffs_at(slice, k, t)), y);
      };
      e.m = widen(DormandPrince<4, decltype(rhs)>(rhs, tol).run(identity2(), t0, t1, h));
    } else {
      auto rhs = [&](double t, const std::array<cplx, 8>& y) {
        const Coeffs c = coeffs_at(slice, k, t);
        const Mat2 A = system_matrix(c);
        const Mat2 m{y[0], y[1], y[2], y[3]};
        const Mat2 d{y[4], y[5], y[6], y[7]};
        const Mat2 fm = mat_mul(A, m);
        const Mat2 fd = mat_add(mat_mul(A, d), mat_mul(system_matrix_dz(c), m));
        return std::array<cplx, 8>{fm[0], fm[1], fm[2], fm[3], fd[0], fd[1], fd[2], fd[3]};
      };
      std::array<cplx, 8> y{1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
      y = DormandPrince<8, decltype(rhs)>(rhs, tol).run(y, t0, t1, h);
      e.m = widen({y[0], y[1], y[2], y[3]});
      e.dm = widen({y[4], y[5], y[6], y[7]});
    }
    if (!slice.piece_exact(k)) {
      // The generator is trace free, so the exact propagator has det 1.
      const lcplx s = 1.0L / std::sqrt(e.m[0] * e.m[3] - e.m[1] * e.m[2]);
      for (auto& v : e.m) v *= s;
      if (z_derivative)
        for (auto& v : e.dm) v *= s;
    }
    if (z_derivative) dacc = add(mul(e.dm, acc), mul(e.m, dacc));
    acc = mul(e.m, acc);
  });
  return {acc, dacc};
}

}  // namespace

Transfer propagate(const SystemSlice& slice, double from, double to, double tol, bool z_derivative) {
  const ExactStep p = propagate_long(slice, from, to, tol, z_derivative);
  const Mat2L& acc = p.m;
  Transfer out;
  out.m = narrow(acc);
  if (z_derivative) out.dm = narrow(p.dm);
  out.det_residual = static_cast<double>(std::abs(acc[0] * acc[3] - acc[1] * acc[2] - 1.0L));
  for (const auto& v : out.m)
    if (!finite(v)) throw IntegrationError("non-finite propagator");
  return out;
}

SolutionBasis solution_basis(const SystemSlice& slice, double c, double tol, std::span<const double> grid) {
  const double period = slice.period();
  const double end = c + period;
  std::vector<double> xs{c, end};
  for (double b : slice.breakpoints()) {
    for (double m = std::floor(c / period); m <= std::floor(end / period); m += 1.0) {
      const double x = m * period + b;
      if (x > c && x < end) xs.push_back(x);
    }
  }
  for (double g : grid)
    if (g > c && g < end) xs.push_back(g);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  SolutionBasis out;
  Mat2L fm{1.0L, 0.0L, 0.0L, 1.0L};
  double prev = c;
  for (double x : xs) {
    if (x > prev) {
      fm = mul(propagate_long(slice, prev, x, tol, false).m, fm);
      prev = x;
    }
    const Mat2 m = narrow(fm);
    out.u1.push_back({x, m[0], m[2]});
    out.u2.push_back({x, m[1], m[3]});
  }
  return out;
}

cplx wronskian(const QuasiState& f, const QuasiState& g) { return f.y * g.yq - f.yq * g.y; }

cplx classical_derivative(const SystemSlice& slice, const QuasiState& s) { return s.yq + slice.Q2(s.x) * s.y; }

}  // namespace ldspec
