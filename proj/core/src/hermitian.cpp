#include "ldspec/hermitian.hpp"

#include "ldspec/error.hpp"

namespace ldspec {

HermitianEigen hermitian_eigen(const CMatrix& a, const std::string& module, bool with_vectors) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw EigenSolverError(module, "Hermitian eigensolver did not converge");
  HermitianEigen out;
  out.values = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

double hermiticity_defect(const CMatrix& a) {
  const double n = a.norm();
  return (a - a.adjoint()).norm() / std::max(n, 1e-300);
}

}  // namespace ldspec
