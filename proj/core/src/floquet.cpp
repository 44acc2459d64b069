#include "ldspec/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "ldspec/error.hpp"
#include "ldspec/parallel.hpp"

namespace ldspec {

Monodromy monodromy(const PeriodicPotential& q, const SignedWeight& r, cplx z, double tol, double c,
                    bool z_derivative) {
  const SystemSlice slice(q, r, z);
  const Transfer t = propagate(slice, c, c + slice.period(), tol, z_derivative);
  return {z, t.m, t.dm, t.det_residual};
}

namespace {

void check_real(cplx v, double tol, const char* what) {
  if (std::abs(v.imag()) > 10.0 * tol * (1.0 + std::abs(v.real()))) {
    std::ostringstream os;
    os << what << " has imaginary residue " << v.imag() << " at real z";
    throw FloquetError(os.str());
  }
}

}  // namespace

double discriminant(const PeriodicPotential& q, const SignedWeight& r, double z, double tol, double c) {
  const cplx tr = monodromy(q, r, z, tol, c).trace();
  check_real(tr, tol, "trace of the monodromy");
  return tr.real();
}

DiscriminantSample discriminant_sample(const PeriodicPotential& q, const SignedWeight& r, double z, double tol,
                                       double c) {
  const Monodromy m = monodromy(q, r, z, tol, c, true);
  check_real(m.trace(), tol, "trace of the monodromy");
  return {z, m.trace().real(), m.trace_dz().real()};
}

std::vector<double> scan_grid(const PeriodicPotential& q, const SignedWeight& r, double zmin, double zmax,
                              std::size_t n_scan) {
  if (!(zmax > zmin) || !std::isfinite(zmin) || !std::isfinite(zmax))
    throw FloquetError("scan range must be finite with zmin < zmax");
  auto to_s = [](double z) { return std::copysign(std::sqrt(std::abs(z)), z); };
  auto to_z = [](double s) { return std::copysign(s * s, s); };
  const double s0 = to_s(zmin), s1 = to_s(zmax);
  if (n_scan == 0) {
    // tr M oscillates like 2 cos(omega sqrt(z rbar)) with rbar the mean
    // total variation of the weight: one period per 2 pi / (omega sqrt(rbar))
    // in sqrt z.
    const double rbar = r.total_variation() / r.period();
    const double scale = std::max(1.0, q.period() * std::sqrt(rbar) / (2.0 * M_PI));
    n_scan = static_cast<std::size_t>(std::ceil(40.0 * scale * (s1 - s0))) + 1;
    n_scan = std::max<std::size_t>(n_scan, 16);
  }
  if (n_scan < 2) throw FloquetError("scan needs at least 2 points");
  std::vector<double> z(n_scan);
  for (std::size_t i = 0; i < n_scan; ++i) {
    const double s = s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(n_scan - 1);
    z[i] = to_z(s);
  }
  z.front() = zmin;
  z.back() = zmax;
  return z;
}

namespace {

using Sampler = std::function<DiscriminantSample(double)>;

double bracket_root(const std::function<double(double)>& f, double a, double b, double fa, double fb) {
  boost::uintmax_t iters = 200;
  auto done = [](double lo, double hi) { return std::abs(hi - lo) <= 4e-16 * std::max(1.0, std::abs(lo)); };
  auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, done, iters);
  return 0.5 * (lo + hi);
}

struct LevelHits {
  std::vector<double> crossings;  // simple roots of Delta - level
  std::vector<double> touches;    // tangential roots
  std::vector<Interval> unresolved;
};

// Roots of tr M(z) = level on the scanned range.
LevelHits analyze_level(const Sampler& sample, const std::vector<DiscriminantSample>& s, double level,
                        double tangency_tol) {
  LevelHits out;
  const std::size_t n = s.size();
  auto f = [&](double z) { return sample(z).delta - level; };
  for (std::size_t i = 0; i < n; ++i) {
    const double fi = s[i].delta - level;
    if (fi == 0.0) {
      out.crossings.push_back(s[i].z);
      continue;
    }
    if (i + 1 < n) {
      const double fj = s[i + 1].delta - level;
      if (fi * fj < 0.0) out.crossings.push_back(bracket_root(f, s[i].z, s[i + 1].z, fi, fj));
    }
  }

  // Candidate tangencies: sign changes of the derivative where the cubic
  // Hermite interpolant of Delta gets close to the level.
  auto dfun = [&](double z) { return sample(z).ddelta; };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& a = s[i];
    const auto& b = s[i + 1];
    if (!(a.ddelta * b.ddelta < 0.0 || a.ddelta == 0.0)) continue;
    const double h = b.z - a.z;
    double closest = INFINITY;
    for (int j = 0; j <= 16; ++j) {
      const double t = j / 16.0;
      const double h00 = 2 * t * t * t - 3 * t * t + 1, h10 = t * t * t - 2 * t * t + t;
      const double h01 = -2 * t * t * t + 3 * t * t, h11 = t * t * t - t * t;
      const double v = h00 * a.delta + h10 * h * a.ddelta + h01 * b.delta + h11 * h * b.ddelta;
      closest = std::min(closest, std::abs(v - level));
    }
    if (closest > 0.1) continue;
    const double zs = a.ddelta == 0.0 ? a.z : bracket_root(dfun, a.z, b.z, a.ddelta, b.ddelta);
    const double fs = sample(zs).delta - level;
    const double split = 1e-6 * (1.0 + std::abs(zs));
    const double fa = a.delta - level, fb = b.delta - level;
    if (fa * fb > 0.0 && fs * fa < 0.0 && std::abs(fs) >= tangency_tol) {
      // A narrow gap or band between two samples: the extremum separates two
      // simple roots.
      out.crossings.push_back(bracket_root(f, a.z, zs, fa, fs));
      out.crossings.push_back(bracket_root(f, zs, b.z, fs, fb));
    } else if (std::abs(fs) < tangency_tol) {
      // Roots this close to the extremum are noise around a touching point.
      auto near = [&](double x) { return std::abs(x - zs) < split; };
      out.crossings.erase(std::remove_if(out.crossings.begin(), out.crossings.end(), near), out.crossings.end());
      // Crossings that survive are a resolved narrow gap, not a touching point.
      const bool resolved_pair = std::any_of(out.crossings.begin(), out.crossings.end(),
                                             [&](double x) { return x >= a.z - h && x <= b.z + h; });
      if (!resolved_pair) out.touches.push_back(zs);
    } else if (std::abs(fs) < 10.0 * tangency_tol) {
      const bool has_roots = std::any_of(out.crossings.begin(), out.crossings.end(),
                                         [&](double x) { return x >= a.z && x <= b.z; });
      if (!has_roots) out.unresolved.push_back({a.z, b.z});
    }
  }
  std::sort(out.crossings.begin(), out.crossings.end());
  std::sort(out.touches.begin(), out.touches.end());
  return out;
}

std::vector<DiscriminantSample> sample_all(const Sampler& sample, const std::vector<double>& grid) {
  return parallel_map<DiscriminantSample>(grid.size(), [&](std::size_t i) { return sample(grid[i]); });
}

}  // namespace

ThetaSpectrum theta_eigenvalues(const PeriodicPotential& q, const SignedWeight& r, double theta, double zmin,
                                double zmax, const ScanOptions& opts) {
  if (!(theta >= 0.0 && theta < 2.0 * M_PI)) throw FloquetError("theta must lie in [0, 2 pi)");
  const Sampler sample = [&](double z) { return discriminant_sample(q, r, z, opts.tol, opts.c); };
  const auto grid = scan_grid(q, r, zmin, zmax, opts.n_scan);
  const auto samples = sample_all(sample, grid);
  const double level = 2.0 * std::cos(theta);
  const LevelHits hits = analyze_level(sample, samples, level, opts.tangency_tol);

  ThetaSpectrum out;
  out.theta = theta;
  out.values = hits.crossings;
  for (double t : hits.touches) {
    out.values.push_back(t);
    out.values.push_back(t);
  }
  std::sort(out.values.begin(), out.values.end());
  out.unresolved = hits.unresolved;
  return out;
}

BandSet stability_intervals(const PeriodicPotential& q, const SignedWeight& r, double zmin, double zmax,
                            const ScanOptions& opts) {
  const Sampler sample = [&](double z) { return discriminant_sample(q, r, z, opts.tol, opts.c); };
  const auto grid = scan_grid(q, r, zmin, zmax, opts.n_scan);
  BandSet out;
  out.samples = sample_all(sample, grid);
  out.scan_range = {zmin, zmax};
  out.n_scan = grid.size();

  for (std::size_t i = 0; i + 1 < out.samples.size(); ++i) {
    const double a = out.samples[i].delta, b = out.samples[i + 1].delta;
    if ((a > 2.0 && b < -2.0) || (a < -2.0 && b > 2.0)) {
      std::ostringstream os;
      os << "discriminant jumps across [-2, 2] between z = " << out.samples[i].z << " and z = "
         << out.samples[i + 1].z << "; scan resolution may miss band structure";
      out.warnings.push_back(os.str());
    }
  }

  const LevelHits up = analyze_level(sample, out.samples, 2.0, opts.tangency_tol);
  const LevelHits down = analyze_level(sample, out.samples, -2.0, opts.tangency_tol);
  out.periodic = up.crossings;
  out.antiperiodic = down.crossings;
  for (double t : up.touches) out.periodic.insert(out.periodic.end(), {t, t});
  for (double t : down.touches) out.antiperiodic.insert(out.antiperiodic.end(), {t, t});
  std::sort(out.periodic.begin(), out.periodic.end());
  std::sort(out.antiperiodic.begin(), out.antiperiodic.end());

  std::vector<double> touches = up.touches;
  touches.insert(touches.end(), down.touches.begin(), down.touches.end());
  std::sort(touches.begin(), touches.end());

  // Cut the range at every crossing and classify each piece at its midpoint.
  std::vector<double> cuts{zmin};
  for (double x : up.crossings) cuts.push_back(x);
  for (double x : down.crossings) cuts.push_back(x);
  cuts.push_back(zmax);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Interval> bands;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    const double d = sample(mid).delta;
    if (std::abs(d) <= 2.0) {
      if (!bands.empty() && bands.back().hi == lo)
        bands.back().hi = hi;
      else
        bands.push_back({lo, hi});
    }
  }
  // Isolated points with |Delta| = 2 outside the bands are degenerate bands.
  for (double x : up.crossings)
    if (std::none_of(bands.begin(), bands.end(), [&](const Interval& b) { return x >= b.lo && x <= b.hi; }))
      bands.push_back({x, x});
  for (double x : down.crossings)
    if (std::none_of(bands.begin(), bands.end(), [&](const Interval& b) { return x >= b.lo && x <= b.hi; }))
      bands.push_back({x, x});
  for (double x : touches)
    if (std::none_of(bands.begin(), bands.end(), [&](const Interval& b) { return x >= b.lo && x <= b.hi; }))
      bands.push_back({x, x});
  std::sort(bands.begin(), bands.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  out.intervals = bands;

  for (const auto& b : bands) {
    double lo = b.lo;
    for (double t : touches) {
      if (t > lo && t < b.hi) {
        out.components.push_back({lo, t});
        lo = t;
      }
    }
    out.components.push_back({lo, b.hi});
  }
  return out;
}

}  // namespace ldspec
