#include "edgefem/solver.hpp"

#include <cmath>

#include <Eigen/LU>

namespace edgefem {

LinearSolution conjugate_gradient(const SparseMatrix& a, const Eigen::VectorXcd& b, double tol,
                                  int max_iter) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw Error("conjugate_gradient: size mismatch");
  if (!(tol > 0.0 && tol < 1.0)) throw Error("conjugate_gradient: tol must lie in (0, 1)");
  const Eigen::Index n = b.size();
  LinearSolution out{Eigen::VectorXcd::Zero(n), {0, 0.0, false, "jacobi-cg"}};
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.report.converged = true;
    return out;
  }

  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = a.coeff(i, i);
    if (!(d.real() > 0.0)) throw SolverBreakdown("conjugate_gradient: non-positive diagonal entry; use solve_dense");
    inv_diag(i) = 1.0 / d.real();
  }

  Eigen::VectorXcd& x = out.x;
  Eigen::VectorXcd r = b;
  Eigen::VectorXcd z = inv_diag.cast<Complex>().cwiseProduct(r);
  Eigen::VectorXcd p = z;
  Eigen::VectorXcd ap(n);
  Complex rz = r.dot(z);
  double rel = 1.0;

  int it = 0;
  while (it < max_iter) {
    ap.noalias() = a * p;
    const Complex pap = p.dot(ap);
    if (!(pap.real() > 0.0))
      throw SolverBreakdown("conjugate_gradient: non-positive curvature, matrix is not HPD; use solve_dense");
    const Complex alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    ++it;
    if (r.norm() / bnorm <= tol) {
      // Recurrence residuals drift; only the true residual decides.
      r = b - a * x;
      rel = r.norm() / bnorm;
      if (rel <= tol) {
        out.report.converged = true;
        break;
      }
      z = inv_diag.cast<Complex>().cwiseProduct(r);
      rz = r.dot(z);
      p = z;
      continue;
    }
    z = inv_diag.cast<Complex>().cwiseProduct(r);
    const Complex rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  out.report.iterations = it;
  out.report.relative_residual = (b - a * x).norm() / bnorm;
  out.report.converged = out.report.converged && out.report.relative_residual <= tol;
  return out;
}

SolveResult solve(const SparseSystem& system, double tol, int max_iter) {
  if (system.mesh == nullptr) throw Error("solve: system has no mesh");
  auto lin = conjugate_gradient(system.matrix, system.rhs, tol, max_iter);
  SolveResult out;
  out.report = lin.report;
  if (lin.report.converged) out.field.emplace(*system.mesh, system.order, expand_free(system, lin.x));
  return out;
}

Eigen::VectorXcd dense_solve(const SparseMatrix& a, const Eigen::VectorXcd& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw Error("dense_solve: size mismatch");
  if (static_cast<std::size_t>(a.rows()) > kDenseLimit)
    throw Error("dense_solve: system exceeds " + std::to_string(kDenseLimit) + " unknowns");
  const Eigen::MatrixXcd dense(a);
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(dense);
  if (!lu.isInvertible()) throw Error("dense_solve: singular matrix");
  return lu.solve(b);
}

SolutionField solve_dense(const SparseSystem& system) {
  if (system.mesh == nullptr) throw Error("solve_dense: system has no mesh");
  return SolutionField(*system.mesh, system.order, expand_free(system, dense_solve(system.matrix, system.rhs)));
}

}  // namespace edgefem
