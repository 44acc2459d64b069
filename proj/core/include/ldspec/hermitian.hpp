#pragma once

#include <string>

#include <Eigen/Dense>

namespace ldspec {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns, orthonormal
};

// Dense Hermitian eigensolve (only the lower triangle is read). Throws
// EigenSolverError tagged with `module` on non-convergence.
HermitianEigen hermitian_eigen(const CMatrix& a, const std::string& module, bool with_vectors = true);

// ||A - A^*||_F / max(||A||_F, tiny).
double hermiticity_defect(const CMatrix& a);

inline CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace ldspec
