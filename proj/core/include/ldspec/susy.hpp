#pragma once

// Dirac-type operator D_theta = [[0, A*], [A, 0]] with A = d/dx + phi on the
// theta-fiber, and its Schrodinger partners T1 = A*A, T2 = AA*.

#include <vector>

#include "ldspec/birman_schwinger.hpp"
#include "ldspec/coefficients.hpp"
#include "ldspec/hermitian.hpp"

namespace ldspec {

struct DiracDiscretization {
  double theta = 0.0;
  int modes = 0;
  CMatrix A;  // A_mn = i kappa_n delta_mn + phi_hat_{m-n}
  CMatrix D;  // [[0, A^*], [A, 0]]
};

DiracDiscretization dirac_discretization(const MiuraField& phi, double theta, int modes);

// Ascending eigenvalues of D_theta.
std::vector<double> dirac_spectrum(const MiuraField& phi, double theta, int modes);

struct PartnerSpectra {
  std::vector<double> t1;  // spec A^*A, ascending
  std::vector<double> t2;  // spec AA^*, ascending
};

// Spectra of the truncated products A_N^* A_N and A_N A_N^*.
PartnerSpectra schrodinger_pair_spectra(const MiuraField& phi, double theta, int modes);

// Galerkin matrix of the form ||A f||^2 (first partner) or ||A^* f||^2
// (second) on the basis, evaluated exactly: kappa_m kappa_n delta_mn
// -/+ i (kappa_m - kappa_n) phi_hat_{m-n} + (phi^2)_hat_{m-n}.
CMatrix partner_form_matrix(const MiuraField& phi, const GalerkinBasis& basis, Partner which);

// Number of singular values of A_N below `threshold`.
int kernel_dimension(const MiuraField& phi, double theta, int modes, double threshold = 1e-8);

struct IsospectralReport {
  double max_rel_mismatch = 0.0;  // |a - b| / max(1, |a|) over matched nonzero eigenvalues
  std::size_t matched = 0;
  int kernel_t1 = 0;
  int kernel_t2 = 0;
  bool counts_agree = true;
};

IsospectralReport isospectral_check(const MiuraField& phi, double theta, int modes, double kernel_threshold = 1e-8);

struct TransferReport {
  std::size_t checked = 0;
  double max_eigen_residual = 0.0;    // ||T1 f - lambda^2 f|| / lambda^2 for the source pairs
  double max_residual = 0.0;          // ||T2 g - lambda^2 g|| / lambda^2 with g = A f / ||A f||
  double max_adjoint_residual = 0.0;  // ||T1 h - lambda^2 h|| / lambda^2 with h = A^* g / ||A^* g||, g from T2
  double max_norm_defect = 0.0;       // | ||A f||^2 - lambda^2 | / lambda^2
};

// Checks the first `count` eigenpairs of T1 with lambda^2 > tol, and the
// matching eigenpairs of T2 mapped back by A^*.
TransferReport eigvec_transfer_check(const MiuraField& phi, double theta, int modes, double tol = 1e-8,
                                     std::size_t count = 10);

struct DiracSquareReport {
  double max_rel_mismatch = 0.0;  // |a - b| / max(1, |a|)
  std::size_t compared = 0;
};

DiracSquareReport dirac_square_check(const MiuraField& phi, double theta, int modes);

struct SpectrumComparison {
  std::vector<double> first;
  std::vector<double> second;
  double max_rel_mismatch = 0.0;  // |a - b| / max(1, |a|)
};

// T1 of the step field +-alpha/2 (jumps at x0 and at the cell boundary)
// against the stiffness of alpha delta_{x0} - alpha delta_0 + alpha^2/4,
// built from atoms without going through the Miura map.
SpectrumComparison point_interaction_check(double alpha, double x0, double theta, int modes, double period);

// Form matrix of T1 against the stiffness of miura_forward(phi, first).
SpectrumComparison miura_consistency_check(const MiuraField& phi, double theta, int modes);

}  // namespace ldspec
