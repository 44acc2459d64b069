#include "ldspec/birman_schwinger.hpp"

#include <algorithm>
#include <cmath>

#include "ldspec/error.hpp"

namespace ldspec {

GalerkinBasis::GalerkinBasis(double period, double theta, int modes) : period_(period), theta_(theta), modes_(modes) {
  if (!(period > 0.0)) throw CoefficientError("basis period must be positive");
  if (modes < 0) throw CoefficientError("number of modes must be nonnegative");
  if (!std::isfinite(theta)) throw CoefficientError("theta must be finite");
}

double GalerkinBasis::kappa(int index) const { return (theta_ + 2.0 * M_PI * mode(index)) / period_; }

std::vector<cplx> fourier_coefficients(const PiecewisePoly& f, int kmax) {
  std::vector<cplx> c(static_cast<std::size_t>(kmax) + 1);
  const double period = f.period();
  for (int k = 0; k <= kmax; ++k) c[k] = f.fourier_integral(2.0 * M_PI * k / period) / period;
  return c;
}

std::vector<cplx> fourier_coefficients(const SignedWeight& w, int kmax) {
  std::vector<cplx> c = fourier_coefficients(w.density(), kmax);
  const double period = w.period();
  for (int k = 0; k <= kmax; ++k)
    for (const auto& a : w.atoms()) c[k] += a.w * std::exp(cplx(0.0, -2.0 * M_PI * k * a.x / period)) / period;
  return c;
}

namespace {

cplx coefficient(const std::vector<cplx>& c, int k) { return k >= 0 ? c[k] : std::conj(c[-k]); }

}  // namespace

CMatrix assemble_stiffness(const PeriodicPotential& q, const GalerkinBasis& basis) {
  const int n = basis.size();
  const auto c = fourier_coefficients(q.q2(), 2 * basis.modes());
  const double period = basis.period();
  CMatrix G(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k = i - j;
      G(i, j) = cplx(0.0, 2.0 * M_PI * k / period) * coefficient(c, k);
    }
    const double kap = basis.kappa(i);
    G(i, i) = kap * kap + q.q1();
  }
  return G;
}

CMatrix assemble_weight_matrix(const SignedWeight& r, const GalerkinBasis& basis) {
  const int n = basis.size();
  const auto c = fourier_coefficients(r, 2 * basis.modes());
  CMatrix R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = coefficient(c, i - j);
  for (int i = 0; i < n; ++i) R(i, i) = c[0].real();
  return R;
}

BSOperator bs_operator(const PeriodicPotential& q, const SignedWeight& r, const GalerkinBasis& basis) {
  BSOperator op;
  op.G = assemble_stiffness(q, basis);
  op.R = assemble_weight_matrix(r, basis);
  const HermitianEigen eg = hermitian_eigen(op.G, "birman_schwinger");
  op.min_eig_G = eg.values(0);
  const double top = std::abs(eg.values(eg.values.size() - 1));
  if (!(op.min_eig_G > 1e-13 * std::max(top, 1.0))) throw PositivityError(op.min_eig_G);
  // G^{-1/2} through the spectral decomposition.
  const RVector inv_sqrt = eg.values.cwiseSqrt().cwiseInverse();
  const CMatrix g_inv_sqrt = eg.vectors * inv_sqrt.asDiagonal() * eg.vectors.adjoint();
  op.K = hermitian_part(g_inv_sqrt * op.R * g_inv_sqrt);
  return op;
}

BSpectrum bs_spectrum(const PeriodicPotential& q, const SignedWeight& r, double theta, int modes,
                      std::optional<double> zeta_threshold) {
  const GalerkinBasis basis(q.period(), theta, modes);
  const BSOperator op = bs_operator(q, r, basis);
  const HermitianEigen ek = hermitian_eigen(op.K, "birman_schwinger", false);

  BSpectrum out;
  out.theta = theta;
  out.modes = modes;
  out.min_eig_G = op.min_eig_G;
  out.zeta.assign(ek.values.data(), ek.values.data() + ek.values.size());
  std::sort(out.zeta.begin(), out.zeta.end(), std::greater<>());
  double zmax = 0.0;
  for (double z : out.zeta) zmax = std::max(zmax, std::abs(z));
  out.threshold = zeta_threshold.value_or(1e-12 * zmax);
  for (double z : out.zeta) {
    if (z > out.threshold) {
      ++out.n_pos;
      out.z_values.push_back(1.0 / z);
    } else if (z < -out.threshold) {
      ++out.n_neg;
      out.z_values.push_back(1.0 / z);
    }
  }
  std::sort(out.z_values.begin(), out.z_values.end());
  return out;
}

std::vector<SignCount> sign_count_trend(const PeriodicPotential& q, const SignedWeight& r, double theta,
                                        const std::vector<int>& mode_list, std::optional<double> zeta_threshold) {
  if (!std::is_sorted(mode_list.begin(), mode_list.end()) ||
      std::adjacent_find(mode_list.begin(), mode_list.end()) != mode_list.end())
    throw CoefficientError("mode list must be strictly increasing");
  std::vector<SignCount> out;
  for (int n : mode_list) {
    const BSpectrum s = bs_spectrum(q, r, theta, n, zeta_threshold);
    out.push_back({n, s.n_pos, s.n_neg});
  }
  return out;
}

CrossValidation cross_validate(const PeriodicPotential& q, const SignedWeight& r, double theta, int modes,
                               double zmin, double zmax, const CrossValidateOptions& opts) {
  const ThetaSpectrum fl = theta_eigenvalues(q, r, theta, zmin, zmax, opts.scan);
  const BSpectrum bs = bs_spectrum(q, r, theta, modes);

  std::vector<double> floquet = fl.values;
  std::stable_sort(floquet.begin(), floquet.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (opts.limit > 0 && floquet.size() > opts.limit) floquet.resize(opts.limit);

  std::vector<double> pool = bs.z_values;
  std::vector<bool> used(pool.size(), false);
  CrossValidation out;
  out.theta = theta;
  out.modes = modes;
  for (double zf : floquet) {
    std::size_t best = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (!used[i] && (best == pool.size() || std::abs(pool[i] - zf) < std::abs(pool[best] - zf))) best = i;
    if (best == pool.size()) {
      out.unmatched_floquet.push_back(zf);
      continue;
    }
    used[best] = true;
    const double rel = std::abs(pool[best] - zf) / std::max(std::abs(zf), 1e-300);
    out.matches.push_back({zf, pool[best], rel});
    out.max_rel_mismatch = std::max(out.max_rel_mismatch, rel);
  }
  if (opts.limit == 0)
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (!used[i] && pool[i] >= zmin && pool[i] <= zmax) out.unmatched_bs.push_back(pool[i]);
  return out;
}

}  // namespace ldspec
