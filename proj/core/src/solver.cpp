#include "tnfem/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace tnfem {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_system(const CsrMatrix& A, const Eigen::VectorXd& b) {
  if (A.rows != A.cols) throw std::invalid_argument("solver: matrix not square");
  if (b.size() != A.rows) throw std::invalid_argument("solver: rhs size mismatch");
}

// Spot-check symmetry on a deterministic sample of stored entries.
void check_symmetry(const CsrMatrix& A) {
  const int nnz = A.nnz();
  const int samples = std::min(nnz, 512);
  const int stride = std::max(1, nnz / std::max(samples, 1));
  for (int s = 0; s < nnz; s += stride) {
    int r = static_cast<int>(std::upper_bound(A.row_ptr.begin(), A.row_ptr.end(), s) -
                             A.row_ptr.begin()) - 1;
    const int c = A.col_idx[s];
    const double v = A.vals[s];
    const double vt = A.coeff(c, r);
    if (std::abs(v - vt) > 1e-12 * (1.0 + std::abs(v)))
      throw std::invalid_argument("solver: matrix is not symmetric");
  }
}

Eigen::VectorXd jacobi_weights(const CsrMatrix& A, bool enabled) {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(A.rows);
  if (!enabled) return d;
  for (int r = 0; r < A.rows; ++r) {
    const double v = std::abs(A.coeff(r, r));
    d[r] = v > 0 ? v : 1.0;
  }
  return d;
}

double true_rel_residual(const CsrMatrix& A, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& x, double bnorm) {
  return (A.apply(x) - b).norm() / bnorm;
}

int default_maxit(const SolverOptions& opt, int n) {
  return opt.max_iterations > 0 ? opt.max_iterations : std::max(20000, 2 * n);
}

}  // namespace

Eigen::VectorXd dense_lu_solve(const CsrMatrix& A, const Eigen::VectorXd& b,
                               SolveReport* report, int dense_limit) {
  check_system(A, b);
  if (A.rows > dense_limit)
    throw std::invalid_argument("dense_lu_solve: system larger than the dense limit");
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.method = "lu";

  const double bnorm = b.norm();
  if (bnorm == 0) {
    rep.seconds = seconds_since(t0);
    if (report) *report = rep;
    return Eigen::VectorXd::Zero(A.rows);
  }

  const Eigen::MatrixXd dense = A.dense();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
  const Eigen::VectorXd x = lu.solve(b);
  rep.rel_residual = (dense * x - b).norm() / bnorm;
  rep.seconds = seconds_since(t0);
  if (!std::isfinite(rep.rel_residual) || rep.rel_residual > 1e-10)
    throw SolverError("dense_lu_solve: singular or ill-conditioned system", rep);
  if (report) *report = rep;
  return x;
}

Eigen::VectorXd conjugate_gradient_solve(const CsrMatrix& A,
                                         const Eigen::VectorXd& b,
                                         const SolverOptions& opt,
                                         SolveReport* report) {
  check_system(A, b);
  check_symmetry(A);
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.method = "cg";

  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(A.rows);
  if (bnorm == 0) {
    rep.seconds = seconds_since(t0);
    if (report) *report = rep;
    return x;
  }

  const Eigen::VectorXd dinv = jacobi_weights(A, opt.jacobi).cwiseInverse();
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = dinv.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const int maxit = default_maxit(opt, A.rows);

  for (int it = 1; it <= maxit; ++it) {
    const Eigen::VectorXd Ap = A.apply(p);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0)) {
      rep.iterations = it;
      rep.rel_residual = r.norm() / bnorm;
      rep.seconds = seconds_since(t0);
      throw SolverError("conjugate_gradient_solve: breakdown, matrix is not "
                        "positive definite", rep);
    }
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    rep.iterations = it;
    if (r.norm() / bnorm <= opt.tol) {
      rep.rel_residual = true_rel_residual(A, b, x, bnorm);
      if (rep.rel_residual <= opt.tol) {
        rep.seconds = seconds_since(t0);
        if (report) *report = rep;
        return x;
      }
    }
    z = dinv.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  rep.rel_residual = true_rel_residual(A, b, x, bnorm);
  rep.seconds = seconds_since(t0);
  throw SolverError("conjugate_gradient_solve: iteration limit reached", rep);
}

Eigen::VectorXd minres_solve(const CsrMatrix& A, const Eigen::VectorXd& b,
                             const SolverOptions& opt, SolveReport* report) {
  check_system(A, b);
  check_symmetry(A);
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.method = "minres";

  const int n = A.rows;
  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (bnorm == 0) {
    rep.seconds = seconds_since(t0);
    if (report) *report = rep;
    return x;
  }

  const Eigen::VectorXd dinv = jacobi_weights(A, opt.jacobi).cwiseInverse();
  // Paige-Saunders recurrences with a symmetric positive preconditioner.
  Eigen::VectorXd r1 = b;
  Eigen::VectorXd y = dinv.cwiseProduct(r1);
  double beta1 = r1.dot(y);
  if (!(beta1 > 0)) {
    rep.seconds = seconds_since(t0);
    throw SolverError("minres_solve: preconditioner is not positive definite",
                      rep);
  }
  beta1 = std::sqrt(beta1);

  double oldb = 0, beta = beta1, dbar = 0, epsln = 0, phibar = beta1;
  double cs = -1, sn = 0;
  Eigen::VectorXd r2 = r1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w2 = Eigen::VectorXd::Zero(n);
  const int maxit = default_maxit(opt, n);

  for (int it = 1; it <= maxit; ++it) {
    const Eigen::VectorXd v = y / beta;
    y = A.apply(v);
    if (it >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = dinv.cwiseProduct(r2);
    oldb = beta;
    const double beta2 = r2.dot(y);
    if (beta2 < 0) {
      rep.iterations = it;
      rep.seconds = seconds_since(t0);
      throw SolverError("minres_solve: preconditioner broke down", rep);
    }
    beta = std::sqrt(beta2);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::sqrt(gbar * gbar + beta * beta);
    gamma = std::max(gamma, 1e-300);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    const Eigen::VectorXd w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;
    rep.iterations = it;

    if (phibar / beta1 <= opt.tol || beta <= 1e-300) {
      rep.rel_residual = true_rel_residual(A, b, x, bnorm);
      if (rep.rel_residual <= opt.tol) {
        rep.seconds = seconds_since(t0);
        if (report) *report = rep;
        return x;
      }
      if (beta <= 1e-300) break;  // Krylov space exhausted, residual stuck
    }
  }
  rep.rel_residual = true_rel_residual(A, b, x, bnorm);
  rep.seconds = seconds_since(t0);
  throw SolverError(
      "minres_solve: stagnated before reaching the requested tolerance", rep);
}

Eigen::VectorXd solve(const CsrMatrix& A, const Eigen::VectorXd& b,
                      const SolverOptions& opt, SolveReport* report) {
  check_system(A, b);
  if (opt.method == "lu")
    return dense_lu_solve(A, b, report, opt.dense_limit);
  if (opt.method == "cg") return conjugate_gradient_solve(A, b, opt, report);
  if (opt.method == "minres") return minres_solve(A, b, opt, report);
  if (opt.method != "auto")
    throw std::invalid_argument("solve: unknown method '" + opt.method + "'");

  if (A.rows <= opt.dense_limit)
    return dense_lu_solve(A, b, report, opt.dense_limit);
  bool positive_diag = true;
  for (int r = 0; r < A.rows && positive_diag; ++r)
    if (!(A.coeff(r, r) > 0)) positive_diag = false;
  if (positive_diag) return conjugate_gradient_solve(A, b, opt, report);
  return minres_solve(A, b, opt, report);
}

}  // namespace tnfem
