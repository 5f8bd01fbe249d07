#include "edgefem/analysis.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace edgefem {

ErrorRecord hcurl_error(const SolutionField& solution, const ExactField& exact, int quad_degree) {
  const int k = solution.order();
  if (quad_degree < 2 * k + 4)
    throw Error("hcurl_error: quadrature degree must be at least 2k + 4");
  const RefQuadratureRule rule = rule_for_degree(quad_degree);
  const CurlBasis& basis = solution.basis();
  std::vector<BasisTable> values;
  std::vector<BasisTable> curls;
  for (const Vec3& p : rule.points()) {
    values.push_back(basis.values(p));
    curls.push_back(basis.curls(p));
  }

  const TetMesh& mesh = solution.mesh();
  double l2 = 0.0;
  double curl = 0.0;
  BasisTable table;
  for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
    const AffineMap map = element_map(mesh, t);
    const OrientationKey key = orientation_key(mesh.tets()[t]);
    const Eigen::VectorXcd local = solution.local_dofs(t);
    const Mat3 curl_map = map.jacobian().transpose() / map.det();
    for (std::size_t l = 0; l < rule.size(); ++l) {
      const Vec3 x = map.apply(rule.points()[l]);
      const double w = std::abs(map.det()) * rule.weights()[l];
      table = values[l];
      apply_orientation(basis, key, table);
      const CVec3 eh = (table * map.inverse()).cast<Complex>().transpose() * local;
      table = curls[l];
      apply_orientation(basis, key, table);
      const CVec3 ch = (table * curl_map).cast<Complex>().transpose() * local;
      l2 += w * (exact.value(x) - eh).squaredNorm();
      curl += w * (exact.curl(x) - ch).squaredNorm();
    }
  }
  ErrorRecord r;
  r.h = mesh.h();
  r.l2_error = std::sqrt(l2);
  r.curl_error = std::sqrt(curl);
  r.hcurl_error = std::sqrt(l2 + curl);
  return r;
}

RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("fit_loglog: size mismatch");
  if (x.size() < 3) throw Error("fit_loglog: at least 3 points are required");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error("fit_loglog: values must be positive");
    a(i, 0) = std::log(x[i]);
    a(i, 1) = 1.0;
    b(i) = std::log(y[i]);
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  RateFit fit;
  fit.slope = c(0);
  fit.intercept = c(1);
  fit.points = static_cast<int>(n);
  fit.residual = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(n));
  return fit;
}

RateFit fit_rate(const std::vector<ErrorRecord>& records, RateAxis axis, int window) {
  if (window < 3) throw Error("fit_rate: window must hold at least 3 points");
  if (records.size() < static_cast<std::size_t>(window)) throw Error("fit_rate: fewer records than the window");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = records.size() - window; i < records.size(); ++i) {
    x.push_back(axis == RateAxis::h ? records[i].h : static_cast<double>(records[i].dofs));
    y.push_back(records[i].hcurl_error);
  }
  return fit_loglog(x, y);
}

ConsistencyError consistency_error(const TetMesh& mesh, int order, const Coefficients& coeffs,
                                   const QuadratureConfig& config, const Eigen::VectorXcd& u,
                                   const Eigen::VectorXcd& v, const QuadratureConfig& reference) {
  const FormValues numeric = evaluate_forms(mesh, order, coeffs, config, u, v);
  const FormValues exact = evaluate_forms(mesh, order, coeffs, reference, u, v);
  return {std::abs(exact.sesquilinear - numeric.sesquilinear), std::abs(exact.antilinear - numeric.antilinear)};
}

double discrete_hcurl_norm(const TetMesh& mesh, int order, const Eigen::VectorXcd& dofs) {
  // mu_inv = 1, -omega^2 eps = 1: Phi(U, U) = |curl U|^2 + |U|^2.
  const Coefficients unit = Coefficients::constant(1.0, -1.0, 1.0);
  const QuadratureConfig exact{rule_for_degree(2 * order - 2), rule_for_degree(2 * order),
                               rule_for_degree(0)};
  const FormValues f = evaluate_forms(mesh, order, unit, exact, dofs, dofs);
  return std::sqrt(std::max(0.0, f.sesquilinear.real()));
}

VectorField random_smooth_field(std::uint64_t seed, int modes) {
  struct Mode {
    Vec3 wave;
    double phase;
    Vec3 amplitude;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Mode> ms;
  for (int i = 0; i < modes; ++i) {
    Mode m;
    m.wave = std::numbers::pi * Vec3(unit(rng), unit(rng), unit(rng));
    m.phase = std::numbers::pi * unit(rng);
    m.amplitude = Vec3(unit(rng), unit(rng), unit(rng));
    ms.push_back(m);
  }
  return [ms](const Vec3& x) -> CVec3 {
    Vec3 out = Vec3::Zero();
    for (const Mode& m : ms) out += std::sin(m.wave.dot(x) + m.phase) * m.amplitude;
    return out.cast<Complex>();
  };
}

// ---------------------------------------------------------------------------
Complex curved_integral(const CurvedMap& map, const CurvedProbeInput& input,
                        const RefQuadratureRule& rule, int order, CurvedMode mode) {
  const CurlBasis basis(order);
  if (input.trial.size() != basis.n_dofs() || input.test.size() != basis.n_dofs())
    throw Error("curved_integral: DOF vectors must match the element basis");
  const MappedQuadrature q = map_curved(rule, map);
  Complex sum = 0.0;
  for (std::size_t l = 0; l < rule.size(); ++l) {
    const Vec3& ref = rule.points()[l];
    const Mat3 j = map.jacobian(ref);
    const double det = j.determinant();
    const Vec3 u_ref = basis.values(ref).transpose() * input.trial;
    const Vec3 v_ref = basis.values(ref).transpose() * input.test;
    Complex value;
    switch (mode) {
      case CurvedMode::mass: {
        const Mat3 jit = j.inverse().transpose();
        const CVec3 u = (jit * u_ref).cast<Complex>();
        const CVec3 v = (jit * v_ref).cast<Complex>();
        value = v.dot(input.coefficient(q.points[l]) * u);
        break;
      }
      case CurvedMode::curlcurl: {
        const CVec3 cu = (j * (basis.curls(ref).transpose() * input.trial) / det).cast<Complex>();
        const CVec3 cv = (j * (basis.curls(ref).transpose() * input.test) / det).cast<Complex>();
        value = cv.dot(input.coefficient(q.points[l]) * cu);
        break;
      }
      case CurvedMode::load: {
        const CVec3 v = (j.inverse().transpose() * v_ref).cast<Complex>();
        value = v.dot(input.source(q.points[l]));
        break;
      }
    }
    sum += q.weights[l] * value;
  }
  return sum;
}

double curved_local_error(const CurvedMap& map, const CurvedProbeInput& input,
                          const RefQuadratureRule& rule, int order, CurvedMode mode) {
  static const RefQuadratureRule reference = tensorized_gl(10);
  return std::abs(curved_integral(map, input, reference, order, mode) -
                  curved_integral(map, input, rule, order, mode));
}

CurvedMap shrinking_curved_element(double s) {
  if (!(s > 0.0)) throw Error("shrinking_curved_element: s must be positive");
  const Vec3 x0(0.1, -0.2, 0.3);
  Mat3 a;
  a << 1.0, 0.2, 0.1,
       0.1, 1.0, 0.2,
       0.0, 0.1, 1.0;
  // Mid-edge displacements of the unit-size element, indexed by local edge.
  std::array<Vec3, 6> bulge;
  bulge.fill(Vec3::Zero());
  bulge[2] = Vec3(0.06, -0.05, 0.04);
  bulge[3] = Vec3(0.12, 0.08, 0.10);
  std::array<Vec3, 10> cp;
  const auto& ref = quadratic_reference_nodes();
  for (int i = 0; i < 10; ++i) cp[i] = x0 + s * (a * ref[i]);
  for (int e = 0; e < 6; ++e) cp[4 + e] += s * s * bulge[e];
  return CurvedMap(cp);
}

}  // namespace edgefem
