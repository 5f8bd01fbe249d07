#pragma once

#include <optional>
#include <string>

#include "edgefem/assembly.hpp"

namespace edgefem {

/// Raised when CG meets a direction of non-positive curvature, i.e. the
/// matrix is not Hermitian positive definite. Use solve_dense instead.
class SolverBreakdown : public Error {
 public:
  using Error::Error;
};

struct SolveReport {
  int iterations = 0;
  /// ||b - A x|| / ||b||, recomputed from the returned iterate.
  double relative_residual = 0.0;
  bool converged = false;
  std::string method;
};

struct LinearSolution {
  Eigen::VectorXcd x;
  SolveReport report;
};

/// Jacobi-preconditioned conjugate gradient from a zero initial guess.
/// Convergence is declared only after the true residual is recomputed and
/// found below `tol`. Throws SolverBreakdown on non-positive curvature or a
/// non-positive diagonal entry.
LinearSolution conjugate_gradient(const SparseMatrix& a, const Eigen::VectorXcd& b, double tol,
                                  int max_iter);

struct SolveResult {
  /// Absent when CG did not converge.
  std::optional<SolutionField> field;
  SolveReport report;
};

SolveResult solve(const SparseSystem& system, double tol = 1e-10, int max_iter = 20000);

/// Largest system accepted by the dense fallback.
inline constexpr std::size_t kDenseLimit = 2000;

/// Full-pivot LU on the dense free-DOF matrix. Throws on a singular matrix or
/// when the system exceeds kDenseLimit.
Eigen::VectorXcd dense_solve(const SparseMatrix& a, const Eigen::VectorXcd& b);

SolutionField solve_dense(const SparseSystem& system);

}  // namespace edgefem
