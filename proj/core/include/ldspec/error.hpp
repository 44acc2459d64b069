#pragma once

#include <stdexcept>
#include <string>

namespace ldspec {

// Base class for every failure raised by the library. `module()` names the
// component that raised it so front ends can report it.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class CoefficientError : public Error {
 public:
  explicit CoefficientError(const std::string& what) : Error("coefficients", what) {}
};

class IntegrationError : public Error {
 public:
  explicit IntegrationError(const std::string& what) : Error("quasi_ode", what) {}
};

class FloquetError : public Error {
 public:
  explicit FloquetError(const std::string& what) : Error("floquet", what) {}
};

class EigenSolverError : public Error {
 public:
  EigenSolverError(std::string module, const std::string& what) : Error(std::move(module), what) {}
};

// The stiffness matrix of T_theta is not positive definite, so the
// left-definite reformulation does not apply.
class PositivityError : public Error {
 public:
  explicit PositivityError(double min_eig)
      : Error("birman_schwinger",
              "stiffness matrix is not positive definite (min eigenvalue " + std::to_string(min_eig) + ")"),
        min_eig_(min_eig) {}

  double min_eig() const noexcept { return min_eig_; }

 private:
  double min_eig_;
};

}  // namespace ldspec
