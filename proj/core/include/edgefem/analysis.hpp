#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "edgefem/assembly.hpp"
#include "edgefem/catalog.hpp"

namespace edgefem {

struct ErrorRecord {
  int n = 0;
  double h = 0.0;
  std::size_t dofs = 0;
  double l2_error = 0.0;
  double curl_error = 0.0;
  double hcurl_error = 0.0;
  int iterations = 0;
};

/// L2, curl and H(curl) errors of a discrete field, integrated element by
/// element with a certified rule of degree `quad_degree` (at least 2k + 4).
/// Only the error columns and h are filled in.
ErrorRecord hcurl_error(const SolutionField& solution, const ExactField& exact, int quad_degree);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
  /// Root-mean-square residual of the log-log fit.
  double residual = 0.0;
};

enum class RateAxis { h, dofs };

/// Least-squares line through (log x, log y). Needs at least 3 points.
RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log(hcurl_error) against log(h) or log(dofs) over the last
/// `window` records.
RateFit fit_rate(const std::vector<ErrorRecord>& records, RateAxis axis, int window);

struct ConsistencyError {
  /// |Phi(U, V) - Phi_h(U, V)|
  double sesquilinear = 0.0;
  /// |F(V) - F_h(V)|
  double antilinear = 0.0;
};

/// Differences between the numeric forms built with `config` and reference
/// forms built with `reference` (degree-10 rules by default).
ConsistencyError consistency_error(const TetMesh& mesh, int order, const Coefficients& coeffs,
                                   const QuadratureConfig& config, const Eigen::VectorXcd& u,
                                   const Eigen::VectorXcd& v,
                                   const QuadratureConfig& reference = reference_config());

/// Discrete H(curl) norm of a full-layout DOF vector, integrated exactly.
double discrete_hcurl_norm(const TetMesh& mesh, int order, const Eigen::VectorXcd& dofs);

/// Smooth random field: a short sum of plane-wave trigonometric modes with
/// amplitudes, wave vectors and phases drawn from a seeded generator.
VectorField random_smooth_field(std::uint64_t seed, int modes = 4);

/// Integrand selected by curved_local_error.
enum class CurvedMode { mass, curlcurl, load };

struct CurvedProbeInput {
  /// M in M U . conj V and M curl U . conj curl V.
  MatrixField coefficient;
  /// J in J . conj V.
  VectorField source;
  /// Reference DOF vectors of the trial and test functions.
  Eigen::VectorXd trial;
  Eigen::VectorXd test;
};

/// |integral - Q(integrand)| on the curved element T(K), where functions are
/// covariant Piola images of reference shape-function combinations through
/// the pointwise Jacobian of T. The reference integral uses tensorized_gl(10)
/// through the same map.
double curved_local_error(const CurvedMap& map, const CurvedProbeInput& input,
                          const RefQuadratureRule& rule, int order, CurvedMode mode);

/// Value of the curved-element integral computed with `rule`.
Complex curved_integral(const CurvedMap& map, const CurvedProbeInput& input,
                        const RefQuadratureRule& rule, int order, CurvedMode mode);

/// Quadratic element T_s(x) = x0 + s A x + s^2 B(x), where B is a fixed
/// quadratic bulge vanishing at the vertices. Shrinking s keeps the element
/// in a regular family: curvature decays relative to the element size.
CurvedMap shrinking_curved_element(double s);

}  // namespace edgefem
