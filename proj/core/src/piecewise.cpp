#include "ldspec/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ldspec/error.hpp"

namespace ldspec {

namespace {

double snap_tol(double period) { return 1e-14 * period; }

}  // namespace

PiecewisePoly::PiecewisePoly(double period, std::vector<double> breaks, std::vector<poly::Poly> pieces)
    : period_(period), breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (!(period_ > 0.0) || !std::isfinite(period_)) throw CoefficientError("period must be positive and finite");
  if (breaks_.empty() || breaks_.size() != pieces_.size())
    throw CoefficientError("piecewise function needs one polynomial per breakpoint");
  if (breaks_[0] != 0.0) throw CoefficientError("first breakpoint must be 0");
  for (std::size_t k = 0; k < breaks_.size(); ++k) {
    if (!std::isfinite(breaks_[k]) || breaks_[k] >= period_)
      throw CoefficientError("breakpoint " + std::to_string(breaks_[k]) + " outside [0, period)");
    if (k > 0 && !(breaks_[k] > breaks_[k - 1])) throw CoefficientError("breakpoints must be strictly increasing");
    for (double c : pieces_[k])
      if (!std::isfinite(c)) throw CoefficientError("non-finite polynomial coefficient");
    pieces_[k] = poly::trimmed(std::move(pieces_[k]));
  }
}

PiecewisePoly PiecewisePoly::constant(double period, double value) {
  return PiecewisePoly(period, {0.0}, {value == 0.0 ? poly::Poly{} : poly::Poly{value}});
}

PiecewisePoly PiecewisePoly::from_cell(double period, std::vector<double> breaks, std::vector<poly::Poly> pieces) {
  if (!(period > 0.0)) throw CoefficientError("period must be positive");
  if (breaks.empty() || breaks.size() != pieces.size())
    throw CoefficientError("piecewise function needs one polynomial per breakpoint");
  std::vector<std::size_t> order(breaks.size());
  std::iota(order.begin(), order.end(), 0);
  for (double& b : breaks) {
    if (!std::isfinite(b)) throw CoefficientError("non-finite breakpoint");
    b -= std::floor(b / period) * period;
    if (b >= period - snap_tol(period)) b = 0.0;
  }
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return breaks[i] < breaks[j]; });
  std::vector<double> b;
  std::vector<poly::Poly> p;
  for (auto i : order) {
    b.push_back(breaks[i]);
    p.push_back(std::move(pieces[i]));
  }
  if (b.front() > 0.0) {
    // The last piece wraps through the period boundary.
    const double offset = period - b.back();
    b.insert(b.begin(), 0.0);
    p.insert(p.begin(), poly::shift(p.back(), offset));
  }
  return PiecewisePoly(period, std::move(b), std::move(p));
}

int PiecewisePoly::max_degree() const {
  int d = -1;
  for (const auto& p : pieces_) d = std::max(d, poly::degree(p));
  return d;
}

double PiecewisePoly::reduce(double x) const {
  double r = x - std::floor(x / period_) * period_;
  if (r >= period_ || r < 0.0) r = 0.0;
  return r;
}

std::size_t PiecewisePoly::locate(double x) const {
  const double r = reduce(x);
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
  return static_cast<std::size_t>(std::distance(breaks_.begin(), it)) - 1;
}

double PiecewisePoly::right_limit(double x) const {
  const double r = reduce(x);
  const std::size_t k = locate(r);
  return poly::eval(pieces_[k], r - breaks_[k]);
}

double PiecewisePoly::left_limit(double x) const {
  const double r = reduce(x);
  const std::size_t k = locate(r);
  if (r == breaks_[k]) {
    const std::size_t prev = k == 0 ? size() - 1 : k - 1;
    return poly::eval(pieces_[prev], piece_length(prev));
  }
  return poly::eval(pieces_[k], r - breaks_[k]);
}

double PiecewisePoly::jump(std::size_t k) const {
  const std::size_t prev = k == 0 ? size() - 1 : k - 1;
  return poly::eval(pieces_[k], 0.0) - poly::eval(pieces_[prev], piece_length(prev));
}

double PiecewisePoly::max_jump() const {
  double m = 0.0;
  for (std::size_t k = 0; k < size(); ++k) m = std::max(m, std::abs(jump(k)));
  return m;
}

double PiecewisePoly::max_abs() const {
  double m = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    const auto& p = pieces_[k];
    const double len = piece_length(k);
    m = std::max({m, std::abs(poly::eval(p, 0.0)), std::abs(poly::eval(p, len))});
    for (double t : poly::roots_in(poly::derivative(p), 0.0, len)) m = std::max(m, std::abs(poly::eval(p, t)));
  }
  return m;
}

double PiecewisePoly::integral() const {
  double acc = 0.0;
  for (std::size_t k = 0; k < size(); ++k) acc += poly::eval(poly::antiderivative(pieces_[k]), piece_length(k));
  return acc;
}

double PiecewisePoly::integral(double a, double b) const {
  // Cumulative integral G(x) from 0, extended with whole periods.
  auto cumulative = [&](double x) {
    const double periods = std::floor(x / period_);
    const double r = reduce(x);
    const std::size_t kr = locate(r);
    double acc = 0.0;
    for (std::size_t k = 0; k < kr; ++k) acc += poly::eval(poly::antiderivative(pieces_[k]), piece_length(k));
    acc += poly::eval(poly::antiderivative(pieces_[kr]), r - breaks_[kr]);
    return periods * integral() + acc;
  };
  return cumulative(b) - cumulative(a);
}

PiecewisePoly PiecewisePoly::derivative() const {
  std::vector<poly::Poly> d;
  d.reserve(size());
  for (const auto& p : pieces_) d.push_back(poly::derivative(p));
  return PiecewisePoly(period_, breaks_, std::move(d));
}

PiecewisePoly PiecewisePoly::primitive() const {
  std::vector<poly::Poly> a;
  a.reserve(size());
  double offset = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    auto anti = poly::antiderivative(pieces_[k]);
    const double end = poly::eval(anti, piece_length(k));
    anti[0] += offset;
    offset += end;
    a.push_back(std::move(anti));
  }
  return PiecewisePoly(period_, breaks_, std::move(a));
}

PiecewisePoly PiecewisePoly::refined(std::span<const double> extra) const {
  std::vector<double> all = breaks_;
  for (double x : extra) all.push_back(reduce(x));
  std::sort(all.begin(), all.end());
  std::vector<double> b;
  for (double x : all) {
    if (x >= period_ - snap_tol(period_)) continue;
    if (b.empty() || x - b.back() > snap_tol(period_)) b.push_back(x);
  }
  std::vector<poly::Poly> p;
  p.reserve(b.size());
  for (double x : b) {
    const std::size_t k = locate(x);
    p.push_back(poly::shift(pieces_[k], x - breaks_[k]));
  }
  return PiecewisePoly(period_, std::move(b), std::move(p));
}

PiecewisePoly PiecewisePoly::shifted(double delta) const {
  struct Seg {
    double start;
    poly::Poly p;
  };
  std::vector<Seg> segs;
  const double tol = snap_tol(period_);
  for (std::size_t k = 0; k < size(); ++k) {
    double s = reduce(breaks_[k] + delta);
    if (s > period_ - tol) s = 0.0;
    const double len = piece_length(k);
    segs.push_back({s, pieces_[k]});
    const double overflow = s + len - period_;
    if (overflow > tol) segs.push_back({0.0, poly::shift(pieces_[k], period_ - s)});
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.start < b.start; });
  std::vector<double> b;
  std::vector<poly::Poly> p;
  for (auto& s : segs) {
    if (!b.empty() && s.start - b.back() <= tol) {
      // A sliver produced by rounding; keep the later (longer) piece.
      p.back() = std::move(s.p);
      continue;
    }
    b.push_back(s.start);
    p.push_back(std::move(s.p));
  }
  if (b.front() != 0.0) {
    p.front() = poly::shift(p.front(), -b.front());
    b.front() = 0.0;
  }
  return PiecewisePoly(period_, std::move(b), std::move(p));
}

PiecewisePoly PiecewisePoly::simplified() const {
  std::vector<double> b{breaks_[0]};
  std::vector<poly::Poly> p{pieces_[0]};
  for (std::size_t k = 1; k < size(); ++k) {
    const bool both_const = poly::degree(p.back()) <= 0 && poly::degree(pieces_[k]) <= 0;
    if (both_const && p.back() == pieces_[k]) continue;
    b.push_back(breaks_[k]);
    p.push_back(pieces_[k]);
  }
  return PiecewisePoly(period_, std::move(b), std::move(p));
}

PiecewisePoly PiecewisePoly::operator-() const {
  PiecewisePoly r = *this;
  r *= -1.0;
  return r;
}

PiecewisePoly& PiecewisePoly::operator+=(double c) {
  for (auto& p : pieces_) {
    if (p.empty()) p.push_back(0.0);
    p[0] += c;
    p = poly::trimmed(std::move(p));
  }
  return *this;
}

PiecewisePoly& PiecewisePoly::operator*=(double c) {
  for (auto& p : pieces_) p = poly::trimmed(poly::scale(p, c));
  return *this;
}

std::vector<double> merged_breaks(const PiecewisePoly& f, const PiecewisePoly& g) {
  if (std::abs(f.period() - g.period()) > 1e-12 * f.period())
    throw CoefficientError("periods of combined functions differ");
  std::vector<double> all = f.breaks();
  all.insert(all.end(), g.breaks().begin(), g.breaks().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

namespace {

template <class Op>
PiecewisePoly combine(const PiecewisePoly& f, const PiecewisePoly& g, Op op) {
  const auto b = merged_breaks(f, g);
  const PiecewisePoly fr = f.refined(b);
  const PiecewisePoly gr = g.refined(b);
  std::vector<poly::Poly> p;
  p.reserve(fr.size());
  for (std::size_t k = 0; k < fr.size(); ++k) p.push_back(op(fr.piece(k), gr.piece(k)));
  return PiecewisePoly(f.period(), fr.breaks(), std::move(p));
}

}  // namespace

PiecewisePoly operator+(const PiecewisePoly& f, const PiecewisePoly& g) {
  return combine(f, g, [](const auto& a, const auto& b) { return poly::add(a, b); });
}

PiecewisePoly operator-(const PiecewisePoly& f, const PiecewisePoly& g) {
  return combine(f, g, [](const auto& a, const auto& b) { return poly::sub(a, b); });
}

PiecewisePoly operator*(const PiecewisePoly& f, const PiecewisePoly& g) {
  return combine(f, g, [](const auto& a, const auto& b) { return poly::mul(a, b); });
}

std::vector<double> PiecewisePoly::zeros() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < size(); ++k) {
    const double len = piece_length(k);
    // Roots this close to a break are treated as lying on it; fitted data
    // often crosses zero within its fit error of a knot.
    const double edge = 1e-9 * len;
    for (double t : poly::roots_in(pieces_[k], 0.0, len)) {
      if (t <= edge)
        out.push_back(breaks_[k]);
      else if (t >= len - edge)
        out.push_back(k + 1 < size() ? breaks_[k + 1] : 0.0);
      else
        out.push_back(breaks_[k] + t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PiecewisePoly PiecewisePoly::sign_split() const {
  const auto z = zeros();
  return z.empty() ? *this : refined(z);
}

namespace {

int piece_sign(const poly::Poly& p, double len) {
  // Sign at the midpoint; pieces of a sign-split function keep one sign.
  const double v = poly::eval(p, 0.5 * len);
  return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

}  // namespace

PiecewisePoly PiecewisePoly::abs_pow(int p) const {
  if (p == 2) return (*this) * (*this);
  if (p != 1) throw CoefficientError("abs_pow supports p = 1 or 2");
  PiecewisePoly s = sign_split();
  for (std::size_t k = 0; k < s.size(); ++k)
    if (piece_sign(s.pieces_[k], s.piece_length(k)) < 0) s.pieces_[k] = poly::scale(s.pieces_[k], -1.0);
  return s;
}

PiecewisePoly PiecewisePoly::positive_part() const {
  PiecewisePoly s = sign_split();
  for (std::size_t k = 0; k < s.size(); ++k)
    if (piece_sign(s.pieces_[k], s.piece_length(k)) <= 0) s.pieces_[k].clear();
  return s;
}

PiecewisePoly PiecewisePoly::negative_part() const { return (-*this).positive_part(); }

std::complex<double> PiecewisePoly::fourier_integral(double lambda) const {
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < size(); ++k)
    acc += poly::fourier_integral(pieces_[k], piece_length(k), breaks_[k], lambda);
  return acc;
}

}  // namespace ldspec
