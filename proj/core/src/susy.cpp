#include "ldspec/susy.hpp"

#include <algorithm>
#include <cmath>

#include "ldspec/error.hpp"

namespace ldspec {

namespace {

cplx coefficient(const std::vector<cplx>& c, int k) { return k >= 0 ? c[k] : std::conj(c[-k]); }

std::vector<double> to_sorted(const RVector& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

}  // namespace

DiracDiscretization dirac_discretization(const MiuraField& phi, double theta, int modes) {
  const GalerkinBasis basis(phi.period(), theta, modes);
  const int n = basis.size();
  const auto c = fourier_coefficients(phi.phi(), 2 * modes);
  DiracDiscretization out;
  out.theta = theta;
  out.modes = modes;
  out.A.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.A(i, j) = coefficient(c, i - j);
  for (int i = 0; i < n; ++i) out.A(i, i) = cplx(c[0].real(), basis.kappa(i));
  out.D = CMatrix::Zero(2 * n, 2 * n);
  out.D.topRightCorner(n, n) = out.A.adjoint();
  out.D.bottomLeftCorner(n, n) = out.A;
  return out;
}

std::vector<double> dirac_spectrum(const MiuraField& phi, double theta, int modes) {
  const auto d = dirac_discretization(phi, theta, modes);
  return to_sorted(hermitian_eigen(d.D, "susy", false).values);
}

PartnerSpectra schrodinger_pair_spectra(const MiuraField& phi, double theta, int modes) {
  const auto d = dirac_discretization(phi, theta, modes);
  const CMatrix t1 = hermitian_part(d.A.adjoint() * d.A);
  const CMatrix t2 = hermitian_part(d.A * d.A.adjoint());
  return {to_sorted(hermitian_eigen(t1, "susy", false).values), to_sorted(hermitian_eigen(t2, "susy", false).values)};
}

CMatrix partner_form_matrix(const MiuraField& phi, const GalerkinBasis& basis, Partner which) {
  const int n = basis.size();
  const int kmax = 2 * basis.modes();
  const auto c = fourier_coefficients(phi.phi(), kmax);
  const auto c2 = fourier_coefficients(phi.phi() * phi.phi(), kmax);
  const double s = which == Partner::first ? -1.0 : 1.0;
  CMatrix T(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k = i - j;
      T(i, j) = s * cplx(0.0, basis.kappa(i) - basis.kappa(j)) * coefficient(c, k) + coefficient(c2, k);
    }
    T(i, i) = basis.kappa(i) * basis.kappa(i) + c2[0].real();
  }
  return T;
}

int kernel_dimension(const MiuraField& phi, double theta, int modes, double threshold) {
  const auto d = dirac_discretization(phi, theta, modes);
  Eigen::BDCSVD<CMatrix> svd(d.A);
  const auto& sv = svd.singularValues();
  int dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) < threshold) ++dim;
  return dim;
}

IsospectralReport isospectral_check(const MiuraField& phi, double theta, int modes, double kernel_threshold) {
  const PartnerSpectra s = schrodinger_pair_spectra(phi, theta, modes);
  IsospectralReport out;
  out.kernel_t1 = kernel_dimension(phi, theta, modes, kernel_threshold);
  out.kernel_t2 = out.kernel_t1;
  {
    // Kernel of A^* from its own singular values.
    const auto d = dirac_discretization(phi, theta, modes);
    Eigen::BDCSVD<CMatrix> svd(CMatrix(d.A.adjoint()));
    int dim = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) < kernel_threshold) ++dim;
    out.kernel_t2 = dim;
  }
  // Drop the kernel (the smallest eigenvalues) and compare the rest in order.
  std::vector<double> a(s.t1.begin() + out.kernel_t1, s.t1.end());
  std::vector<double> b(s.t2.begin() + out.kernel_t2, s.t2.end());
  out.counts_agree = a.size() == b.size();
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) out.max_rel_mismatch = std::max(out.max_rel_mismatch, rel_gap(a[i], b[i]));
  out.matched = n;
  if (!out.counts_agree) out.max_rel_mismatch = INFINITY;
  return out;
}

TransferReport eigvec_transfer_check(const MiuraField& phi, double theta, int modes, double tol, std::size_t count) {
  // Residuals of order ||A||^3 eps / lambda^3 are intrinsic to any computed
  // eigenvector, so the check runs in extended precision. Eigenpairs of the
  // Gram matrices come from the singular value decomposition of A.
  using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  using LVector = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, 1>;
  const auto d = dirac_discretization(phi, theta, modes);
  const LMatrix A = d.A.cast<std::complex<long double>>();
  const LMatrix t1 = A.adjoint() * A;
  const LMatrix t2 = A * A.adjoint();
  Eigen::BDCSVD<LMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  TransferReport out;
  auto rel = [](const LVector& r, long double lam2) { return static_cast<double>(r.norm() / lam2); };
  for (Eigen::Index i = sv.size() - 1; i >= 0 && out.checked < count; --i) {
    const long double lam2 = sv(i) * sv(i);
    if (!(lam2 > tol)) continue;
    const LVector f = svd.matrixV().col(i);
    out.max_eigen_residual = std::max(out.max_eigen_residual, rel(t1 * f - lam2 * f, lam2));
    const LVector af = A * f;
    const long double norm_af = af.norm();
    out.max_norm_defect = std::max(out.max_norm_defect, static_cast<double>(std::abs(norm_af * norm_af - lam2) / lam2));
    const LVector g = af / norm_af;
    out.max_residual = std::max(out.max_residual, rel(t2 * g - lam2 * g, lam2));
    const LVector ah = A.adjoint() * svd.matrixU().col(i);
    const LVector h = ah / ah.norm();
    out.max_adjoint_residual = std::max(out.max_adjoint_residual, rel(t1 * h - lam2 * h, lam2));
    ++out.checked;
  }
  return out;
}

DiracSquareReport dirac_square_check(const MiuraField& phi, double theta, int modes) {
  std::vector<double> squares = dirac_spectrum(phi, theta, modes);
  for (double& v : squares) v *= v;
  std::sort(squares.begin(), squares.end());
  const PartnerSpectra s = schrodinger_pair_spectra(phi, theta, modes);
  std::vector<double> both = s.t1;
  both.insert(both.end(), s.t2.begin(), s.t2.end());
  std::sort(both.begin(), both.end());
  DiracSquareReport out;
  out.compared = std::min(squares.size(), both.size());
  for (std::size_t i = 0; i < out.compared; ++i)
    out.max_rel_mismatch = std::max(out.max_rel_mismatch, rel_gap(squares[i], both[i]));
  if (squares.size() != both.size()) out.max_rel_mismatch = INFINITY;
  return out;
}

namespace {

SpectrumComparison compare_spectra(const CMatrix& a, const CMatrix& b) {
  SpectrumComparison out;
  out.first = to_sorted(hermitian_eigen(hermitian_part(a), "susy", false).values);
  out.second = to_sorted(hermitian_eigen(hermitian_part(b), "susy", false).values);
  for (std::size_t i = 0; i < out.first.size(); ++i)
    out.max_rel_mismatch = std::max(out.max_rel_mismatch, rel_gap(out.first[i], out.second[i]));
  return out;
}

}  // namespace

SpectrumComparison point_interaction_check(double alpha, double x0, double theta, int modes, double period) {
  const MiuraField phi = step_miura_field(alpha, x0, period);
  const GalerkinBasis basis(period, theta, modes);
  const CMatrix t1 = partner_form_matrix(phi, basis, Partner::first);
  // alpha delta_{x0} - alpha delta_0 as jumps of a primitive.
  const SignedWeight atoms(PiecewisePoly::constant(period, 0.0), {{0.0, -alpha}, {x0, alpha}});
  const PeriodicPotential delta(0.25 * alpha * alpha + atoms.atom_mass() / period, atoms.atom_primitive());
  return compare_spectra(t1, assemble_stiffness(delta, basis));
}

SpectrumComparison miura_consistency_check(const MiuraField& phi, double theta, int modes) {
  const GalerkinBasis basis(phi.period(), theta, modes);
  return compare_spectra(partner_form_matrix(phi, basis, Partner::first),
                         assemble_stiffness(miura_forward(phi, Partner::first), basis));
}

}  // namespace ldspec
