#pragma once

#include <string>

#include "edgefem/assembly.hpp"

namespace edgefem {

/// Closed-form field and its curl.
struct ExactField {
  VectorField value;
  VectorField curl;
};

/// Manufactured problem on [-1, 1]^3 with exact solution
///   E = ((y^2 - 1)(z^2 - 1), 0, 0),
/// isotropic coefficients mu_inv = 1/mu0, eps = eps0(z), and the current
///   J = (i / omega) (curl mu_inv curl E - omega^2 eps E),
/// which makes E the exact solution with vanishing tangential trace.
struct Problem {
  std::string id;
  double mu0 = 10.0;
  double omega = 1.0;
  Coefficients coeffs;
  ExactField exact;
  /// curl curl E, used by the self-check.
  VectorField curl_curl;
};

/// mu0 = 10, eps0 = -10, omega = 1.
Problem cube_poly();

/// mu0 = 10, eps0(z) = -10 - 9 sin(m pi z), omega = 1.
Problem cube_oscillatory(int m);

/// "cube_poly", or "cube_oscillatory" with the given m.
Problem make_problem(const std::string& id, int m = 10);

struct SelfCheckReport {
  bool passed = false;
  /// max |curl mu_inv curl E - omega^2 eps E + i omega J| over the samples.
  double pde_residual = 0.0;
  /// Finite-difference check of the closed-form curl and curl curl.
  double curl_mismatch = 0.0;
  double curl_curl_mismatch = 0.0;
};

/// Evaluates the PDE residual at `samples` seeded random points of the cube
/// and cross-checks the closed-form derivatives by central differences.
SelfCheckReport self_check(const Problem& problem, int samples = 50, unsigned long long seed = 7);

}  // namespace edgefem
