#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ldspec/poly.hpp"

namespace ldspec {

// Periodic piecewise polynomial on [0, period).
//
// Piece k covers [breaks[k], breaks[k+1]) (the last one ends at the period)
// and is stored in its local coordinate t = x - breaks[k]. breaks[0] is
// always 0. Values at a breakpoint are left limits; jumps across breakpoints
// are allowed and carry meaning (a jump of a primitive is an atom of its
// derivative).
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(double period, std::vector<double> breaks, std::vector<poly::Poly> pieces);

  static PiecewisePoly constant(double period, double value);
  // Builds from breakpoints given anywhere in [0, period); when the first
  // breakpoint is not 0 the wrapping piece is split at 0.
  static PiecewisePoly from_cell(double period, std::vector<double> breaks, std::vector<poly::Poly> pieces);

  double period() const { return period_; }
  std::size_t size() const { return breaks_.size(); }
  const std::vector<double>& breaks() const { return breaks_; }
  const poly::Poly& piece(std::size_t k) const { return pieces_[k]; }
  const std::vector<poly::Poly>& pieces() const { return pieces_; }
  double piece_start(std::size_t k) const { return breaks_[k]; }
  double piece_end(std::size_t k) const { return k + 1 < breaks_.size() ? breaks_[k + 1] : period_; }
  double piece_length(std::size_t k) const { return piece_end(k) - piece_start(k); }
  int max_degree() const;

  // Index of the piece containing the reduced position x mod period
  // (right-continuous convention: a breakpoint belongs to the piece it starts).
  std::size_t locate(double x) const;
  double reduce(double x) const;

  double operator()(double x) const { return left_limit(x); }
  double left_limit(double x) const;
  double right_limit(double x) const;
  // f(breaks[k]+) - f(breaks[k]-).
  double jump(std::size_t k) const;
  // Largest |jump| over all breakpoints.
  double max_jump() const;
  double max_abs() const;

  double integral() const;
  // Integral over [a, b] of the periodic extension (any a <= b).
  double integral(double a, double b) const;
  double mean() const { return integral() / period_; }

  // Pointwise derivative on each piece; jumps are dropped.
  PiecewisePoly derivative() const;
  // Continuous primitive vanishing at 0 within the cell. Its periodic
  // representation jumps at 0 by minus the integral over one period.
  PiecewisePoly primitive() const;

  // Same function with additional breakpoints.
  PiecewisePoly refined(std::span<const double> extra) const;
  // x -> f(x - delta).
  PiecewisePoly shifted(double delta) const;
  // Merges adjacent pieces that represent the same polynomial.
  PiecewisePoly simplified() const;

  PiecewisePoly operator-() const;
  PiecewisePoly& operator+=(double c);
  PiecewisePoly& operator*=(double c);
  friend PiecewisePoly operator+(const PiecewisePoly& f, const PiecewisePoly& g);
  friend PiecewisePoly operator-(const PiecewisePoly& f, const PiecewisePoly& g);
  friend PiecewisePoly operator*(const PiecewisePoly& f, const PiecewisePoly& g);
  friend PiecewisePoly operator*(double c, PiecewisePoly f) { return f *= c; }
  friend PiecewisePoly operator+(PiecewisePoly f, double c) { return f += c; }

  // Interior sign changes/zeros of each piece, as absolute positions.
  std::vector<double> zeros() const;
  // Same function with breakpoints at every interior zero, so that every
  // piece has a single sign.
  PiecewisePoly sign_split() const;
  // |f|^p for p = 1, 2, built exactly.
  PiecewisePoly abs_pow(int p) const;
  // max(f, 0) and max(-f, 0).
  PiecewisePoly positive_part() const;
  PiecewisePoly negative_part() const;

  // Integral of f(x) exp(-i lambda x) over one period [0, period).
  std::complex<double> fourier_integral(double lambda) const;

  // Identical breakpoints and coefficients.
  friend bool operator==(const PiecewisePoly& f, const PiecewisePoly& g) = default;

 private:
  double period_ = 1.0;
  std::vector<double> breaks_{0.0};
  std::vector<poly::Poly> pieces_{poly::Poly{}};
};

// Union of the breakpoint sets of two functions with the same period.
std::vector<double> merged_breaks(const PiecewisePoly& f, const PiecewisePoly& g);

}  // namespace ldspec
