#pragma once

// Fourier-Galerkin discretization of the theta-fiber T_theta of
// -d^2/dx^2 + q and of the Birman-Schwinger operator
// K = T_theta^{-1/2} r T_theta^{-1/2}, whose nonzero eigenvalues zeta give
// the quasi-periodic eigenvalues z = 1/zeta of -psi'' + q psi = z r psi.

#include <optional>
#include <vector>

#include "ldspec/coefficients.hpp"
#include "ldspec/floquet.hpp"
#include "ldspec/hermitian.hpp"

namespace ldspec {

// Orthonormal modes e_n(x) = period^{-1/2} exp(i kappa_n x), n = -N..N,
// kappa_n = (theta + 2 pi n) / period; each satisfies g(period) = e^{i theta} g(0).
class GalerkinBasis {
 public:
  GalerkinBasis(double period, double theta, int modes);

  double period() const { return period_; }
  double theta() const { return theta_; }
  int modes() const { return modes_; }
  int size() const { return 2 * modes_ + 1; }
  int mode(int index) const { return index - modes_; }
  double kappa(int index) const;

 private:
  double period_, theta_;
  int modes_;
};

// c_k = (1/period) int_0^period f(x) exp(-2 pi i k x / period) dx for
// k = 0..kmax, exact from the polynomial pieces.
std::vector<cplx> fourier_coefficients(const PiecewisePoly& f, int kmax);

// Same for the measure rho dx + sum w_j delta_{x_j}.
std::vector<cplx> fourier_coefficients(const SignedWeight& w, int kmax);

// G_mn = (kappa_n^2 + q1) delta_mn + i (2 pi (m - n) / period) c_{m-n}(q2):
// the form of -d^2/dx^2 + q on the basis.
CMatrix assemble_stiffness(const PeriodicPotential& q, const GalerkinBasis& basis);

// R_mn = int conj(e_m) e_n dmu.
CMatrix assemble_weight_matrix(const SignedWeight& r, const GalerkinBasis& basis);

struct BSOperator {
  CMatrix G;  // stiffness
  CMatrix R;  // weight
  CMatrix K;  // G^{-1/2} R G^{-1/2}
  double min_eig_G = 0.0;
};

// Throws PositivityError when G is not positive definite.
BSOperator bs_operator(const PeriodicPotential& q, const SignedWeight& r, const GalerkinBasis& basis);

struct BSpectrum {
  double theta = 0.0;
  int modes = 0;
  std::vector<double> zeta;      // descending
  std::vector<double> z_values;  // 1/zeta for |zeta| > threshold, ascending
  int n_pos = 0;
  int n_neg = 0;
  double threshold = 0.0;
  double min_eig_G = 0.0;
};

// zeta_threshold defaults to 1e-12 max|zeta|.
BSpectrum bs_spectrum(const PeriodicPotential& q, const SignedWeight& r, double theta, int modes,
                      std::optional<double> zeta_threshold = {});

struct SignCount {
  int modes = 0;
  int n_pos = 0;
  int n_neg = 0;
};

std::vector<SignCount> sign_count_trend(const PeriodicPotential& q, const SignedWeight& r, double theta,
                                        const std::vector<int>& mode_list, std::optional<double> zeta_threshold = {});

struct EngineMatch {
  double z_floquet = 0.0;
  double z_bs = 0.0;
  double rel_mismatch = 0.0;
};

struct CrossValidation {
  double theta = 0.0;
  int modes = 0;
  std::vector<EngineMatch> matches;
  std::vector<double> unmatched_floquet;
  std::vector<double> unmatched_bs;  // BS values inside the range left without a partner
  double max_rel_mismatch = 0.0;
};

struct CrossValidateOptions {
  ScanOptions scan;
  // Compare only the `limit` Floquet eigenvalues of smallest |z| (0: all).
  std::size_t limit = 0;
};

CrossValidation cross_validate(const PeriodicPotential& q, const SignedWeight& r, double theta, int modes,
                               double zmin, double zmax, const CrossValidateOptions& opts = {});

}  // namespace ldspec
