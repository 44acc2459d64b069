#pragma once

// Monodromy matrix, discriminant and spectral sets of the periodic pencil.

#include <string>
#include <utility>
#include <vector>

#include "ldspec/coefficients.hpp"
#include "ldspec/quasi_ode.hpp"

namespace ldspec {

struct Monodromy {
  cplx z;
  // [[u1, u2], [u1^[1], u2^[1]]] at c + period.
  Mat2 m;
  // d/dz of m; zero unless requested.
  Mat2 dm{};
  double det_residual = 0.0;

  cplx trace() const { return m[0] + m[3]; }
  cplx trace_dz() const { return dm[0] + dm[3]; }
  cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
};

Monodromy monodromy(const PeriodicPotential& q, const SignedWeight& r, cplx z, double tol = 1e-10, double c = 0.0,
                    bool z_derivative = false);

// tr M(z) for real z. Throws FloquetError when the imaginary residue exceeds
// 10 tol (1 + |tr M|), which signals an integrator failure.
double discriminant(const PeriodicPotential& q, const SignedWeight& r, double z, double tol = 1e-10, double c = 0.0);

struct DiscriminantSample {
  double z = 0.0;
  double delta = 0.0;   // tr M(z)
  double ddelta = 0.0;  // d tr M / dz
};

DiscriminantSample discriminant_sample(const PeriodicPotential& q, const SignedWeight& r, double z,
                                       double tol = 1e-10, double c = 0.0);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct ScanOptions {
  double tol = 1e-10;      // integrator tolerance
  double c = 0.0;          // reference point of the monodromy
  std::size_t n_scan = 0;  // 0: density rule (40 points per unit of sqrt|z|, scaled by the weight)
  double tangency_tol = 1e-7;
};

// Scan points, uniform in the signed square root sign(z) sqrt|z|.
std::vector<double> scan_grid(const PeriodicPotential& q, const SignedWeight& r, double zmin, double zmax,
                              std::size_t n_scan = 0);

struct BandSet {
  std::vector<Interval> intervals;   // closed, merged
  std::vector<Interval> components;  // split at touching points (closures of components of |Delta| < 2)
  std::vector<double> periodic;      // Delta = +2 in range (touching points listed twice)
  std::vector<double> antiperiodic;  // Delta = -2 in range (touching points listed twice)
  Interval scan_range;
  std::size_t n_scan = 0;
  std::vector<std::string> warnings;
  std::vector<DiscriminantSample> samples;
};

// Conditional stability set {z in range : |tr M(z)| <= 2}.
BandSet stability_intervals(const PeriodicPotential& q, const SignedWeight& r, double zmin, double zmax,
                            const ScanOptions& opts = {});

struct ThetaSpectrum {
  double theta = 0.0;
  std::vector<double> values;         // sorted, with multiplicity
  std::vector<Interval> unresolved;   // near-tangencies not decided within tolerance
};

// Roots of tr M(z) = 2 cos(theta) in [zmin, zmax]; touching roots are
// reported twice.
ThetaSpectrum theta_eigenvalues(const PeriodicPotential& q, const SignedWeight& r, double theta, double zmin,
                                double zmax, const ScanOptions& opts = {});

}  // namespace ldspec
