#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "tnfem/assembly.hpp"

namespace tnfem {

struct SolveReport {
  std::string method;
  int iterations = 0;
  double rel_residual = 0;  // ||Ax - b|| / ||b||, true residual
  double seconds = 0;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveReport rep)
      : std::runtime_error(what), rep_(std::move(rep)) {}
  const SolveReport& report() const { return rep_; }

 private:
  SolveReport rep_;
};

struct SolverOptions {
  std::string method = "auto";  // auto | lu | cg | minres
  double tol = 1e-10;           // relative residual target (iterative)
  int max_iterations = -1;      // < 0: max(20000, 2n)
  bool jacobi = true;           // |diag| preconditioner, zeros clamped to 1
  int dense_limit = 8000;       // largest n the dense path accepts
};

// Dense partial-pivoting LU.  Fails when n exceeds the limit or the residual
// check (1e-10 relative) reveals a singular or hopeless system.
Eigen::VectorXd dense_lu_solve(const CsrMatrix& A, const Eigen::VectorXd& b,
                               SolveReport* report = nullptr,
                               int dense_limit = 8000);

// Conjugate gradients for symmetric positive definite systems.  Symmetry is
// spot-checked (1e-12 on sampled entries); indefiniteness surfaces as a
// breakdown error.
Eigen::VectorXd conjugate_gradient_solve(const CsrMatrix& A,
                                         const Eigen::VectorXd& b,
                                         const SolverOptions& opt = {},
                                         SolveReport* report = nullptr);

// MINRES for symmetric (possibly indefinite or saddle) systems, optionally
// Jacobi preconditioned.  Errors on breakdown or iteration exhaustion with
// the report attached (stagnation at an eigenvalue shows up this way).
Eigen::VectorXd minres_solve(const CsrMatrix& A, const Eigen::VectorXd& b,
                             const SolverOptions& opt = {},
                             SolveReport* report = nullptr);

// Dispatch: explicit method, or "auto" = dense LU up to the dense limit,
// else CG when every diagonal entry is positive, else MINRES.
Eigen::VectorXd solve(const CsrMatrix& A, const Eigen::VectorXd& b,
                      const SolverOptions& opt = {},
                      SolveReport* report = nullptr);

}  // namespace tnfem
