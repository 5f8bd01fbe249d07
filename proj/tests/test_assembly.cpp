#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "edgefem/assembly.hpp"
#include "edgefem/catalog.hpp"
#include "edgefem/solver.hpp"

using namespace edgefem;

namespace {

AffineMap random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Mat3 j;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) j(r, c) = u(rng) + (r == c ? 1.0 : 0.0);
  return AffineMap(Vec3(u(rng), u(rng), u(rng)), j);
}

// Physical gradients of the barycentric coordinates.
std::array<Vec3, 4> bary_gradients(const AffineMap& map) {
  std::array<Vec3, 4> g;
  for (int i = 0; i < 3; ++i) g[i + 1] = map.inverse().row(i).transpose();
  g[0] = -(g[1] + g[2] + g[3]);
  return g;
}

double lambda_product_integral(int a, int b, double volume) { return volume * (a == b ? 2.0 : 1.0) / 20.0; }

}  // namespace

// Whitney element matrices against the closed forms
//   int w_i . w_j   from int lambda_a lambda_b = |T| (1 + delta_ab) / 20,
//   curl w_ab     = 2 grad lambda_a x grad lambda_b,
//   int w_ab      = |T| (grad lambda_b - grad lambda_a) / 4.
TEST(Assembly, WhitneyMatricesMatchClosedForm) {
  std::mt19937_64 rng(5);
  const CurlBasis basis(1);
  for (int trial = 0; trial < 4; ++trial) {
    const AffineMap map = random_map(rng);
    const double vol = std::abs(map.det()) / 6.0;
    const auto g = bary_gradients(map);
    const Complex mu_inv(2.0, 0.0), eps(3.0, 0.0);
    const double omega = 0.5;
    const CVec3 j0(1.0, -2.0, 0.5);
    const auto coeffs = Coefficients::constant(mu_inv, eps, omega, [j0](const Vec3&) { return j0; });
    const auto em = element_matrices(map, basis, coeffs, QuadratureConfig::uniform(builtin_rule("pt4")));
    for (int i = 0; i < 6; ++i) {
      const int a = kLocalEdges[i][0], b = kLocalEdges[i][1];
      const Vec3 ci = 2.0 * g[a].cross(g[b]);
      for (int j = 0; j < 6; ++j) {
        const int c = kLocalEdges[j][0], d = kLocalEdges[j][1];
        const Vec3 cj = 2.0 * g[c].cross(g[d]);
        EXPECT_NEAR(std::abs(em.curl_curl(i, j) - mu_inv * vol * ci.dot(cj)), 0.0, 1e-12);
        const double m = lambda_product_integral(a, c, vol) * g[b].dot(g[d]) -
                         lambda_product_integral(a, d, vol) * g[b].dot(g[c]) -
                         lambda_product_integral(b, c, vol) * g[a].dot(g[d]) +
                         lambda_product_integral(b, d, vol) * g[a].dot(g[c]);
        EXPECT_NEAR(std::abs(em.mass(i, j) - (-omega * omega) * eps * m), 0.0, 1e-12);
      }
      const Complex f = Complex(0.0, -omega) * (vol / 4.0) * j0.dot((g[b] - g[a]).cast<Complex>());
      EXPECT_NEAR(std::abs(em.load(i) - f), 0.0, 1e-12);
    }
  }
}

TEST(Assembly, WhitneyCurlCurlIsExactForAnyRule) {
  std::mt19937_64 rng(6);
  const CurlBasis basis(1);
  const AffineMap map = random_map(rng);
  const auto coeffs = Coefficients::constant(1.0, -1.0, 1.0);
  const auto ref = element_matrices(map, basis, coeffs, reference_config());
  for (const char* label : {"pt1_offcenter", "pt1_centroid", "pt4"}) {
    const auto em = element_matrices(map, basis, coeffs, QuadratureConfig::uniform(builtin_rule(label)));
    EXPECT_LE((em.curl_curl - ref.curl_curl).norm(), 1e-13) << label;
  }
  const auto centroid = element_matrices(map, basis, coeffs, QuadratureConfig::uniform(builtin_rule("pt1_centroid")));
  EXPECT_GT((centroid.mass - ref.mass).norm(), 1e-4);
}

// Under pure scaling x -> s x the k = 1 mass matrix scales like s for any
// rule, so with constant data the centroid-rule error is a fixed fraction
// of the matrix: it shrinks in absolute terms only.
TEST(Assembly, CentroidMassErrorUnderScaling) {
  const CurlBasis basis(1);
  const auto coeffs = Coefficients::constant(1.0, 1.0, 1.0);
  Mat3 j;
  j << 1.0, 0.2, 0.1, 0.0, 0.9, 0.3, 0.1, 0.0, 1.1;
  double relative_at_one = 0.0;
  for (double s : {1.0, 0.5, 0.25}) {
    const AffineMap map(Vec3(0.1, 0.2, 0.3), s * j);
    const auto ref = element_matrices(map, basis, coeffs, reference_config());
    const auto c = element_matrices(map, basis, coeffs, QuadratureConfig::uniform(builtin_rule("pt1_centroid")));
    const double abs_err = (c.mass - ref.mass).norm();
    const double rel = abs_err / ref.mass.norm();
    if (s == 1.0) relative_at_one = rel;
    EXPECT_NEAR(rel, relative_at_one, 1e-12);
    EXPECT_NEAR(abs_err, s * relative_at_one * element_matrices(AffineMap(Vec3::Zero(), j), basis, coeffs,
                                                                reference_config()).mass.norm(), 1e-12);
  }
  EXPECT_GT(relative_at_one, 0.1);
}

// With constant data, a rule exact to degree 2k - 2 (curl-curl) and 2k
// (mass) reproduces the reference matrices.
TEST(Assembly, ExactnessEquivalence) {
  std::mt19937_64 rng(7);
  const RefQuadratureRule oracle = tensorized_gl(8);
  for (int k : {1, 2}) {
    const CurlBasis basis(k);
    const AffineMap map = random_map(rng);
    const auto coeffs = Coefficients::constant(Complex(1.5, 0.0), Complex(-2.0, 0.5), 1.3);
    const QuadratureConfig cheap{rule_for_degree(2 * k - 2), rule_for_degree(2 * k), rule_for_degree(0)};
    const auto a = element_matrices(map, basis, coeffs, cheap);
    const auto b = element_matrices(map, basis, coeffs, QuadratureConfig::uniform(oracle));
    EXPECT_LE((a.curl_curl - b.curl_curl).cwiseAbs().maxCoeff(), 1e-11) << "k=" << k;
    EXPECT_LE((a.mass - b.mass).cwiseAbs().maxCoeff(), 1e-11) << "k=" << k;
  }
}

TEST(Assembly, ScaledMassRuleDoublesMass) {
  const TetMesh mesh = structured_cube_mesh(2);
  const Problem p = cube_poly();
  const RefQuadratureRule q = builtin_rule("pt4");
  const auto base = assemble(mesh, 1, p.coeffs, QuadratureConfig::uniform(q));
  const auto doubled = assemble(mesh, 1, p.coeffs, QuadratureConfig{q, q.scaled(2.0), q});
  const auto no_mass = assemble(mesh, 1, Coefficients::constant(1.0 / p.mu0, 0.0, p.omega), QuadratureConfig::uniform(q));
  const SparseMatrix mass = base.matrix - no_mass.matrix;
  const SparseMatrix expected = no_mass.matrix + 2.0 * mass;
  EXPECT_LE((doubled.matrix - expected).norm(), 1e-12 * expected.norm());
}

TEST(Assembly, SingleCellSystemSizes) {
  const TetMesh mesh = structured_cube_mesh(1);
  const Problem p = cube_poly();
  const auto s1 = assemble(mesh, 1, p.coeffs, reference_config());
  EXPECT_EQ(s1.n_free, 1u);
  EXPECT_EQ(s1.n_total, 19u);
  EXPECT_EQ(s1.matrix.rows(), 1);
  const auto s2 = assemble(mesh, 2, p.coeffs, reference_config());
  EXPECT_EQ(s2.n_total, 2u * 19u + 2u * 18u);
  EXPECT_EQ(s2.n_free, 2u * 1u + 2u * 6u);
}

TEST(Assembly, RealSymmetricDataGivesRealSymmetricMatrix) {
  const TetMesh mesh = structured_cube_mesh(3);
  const Problem p = cube_poly();
  for (int k : {1, 2}) {
    const auto s = assemble(mesh, k, p.coeffs, QuadratureConfig::uniform(builtin_rule("pt5")));
    const SparseMatrix adj = s.matrix.adjoint();
    EXPECT_LE((s.matrix - adj).norm(), 1e-13 * s.matrix.norm());
    EXPECT_LE(s.matrix.imag().norm(), 0.0);
  }
}

TEST(Assembly, FormsMatchMatrixAndVector) {
  const TetMesh mesh = structured_cube_mesh(2);
  const Problem p = cube_oscillatory(2);
  const QuadratureConfig q = QuadratureConfig::uniform(builtin_rule("pt5"));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int k : {1, 2}) {
    const auto total = static_cast<Eigen::Index>(global_dof_count(mesh, k));
    Eigen::VectorXcd u(total), v(total);
    for (Eigen::Index i = 0; i < total; ++i) {
      u(i) = Complex(nd(rng), nd(rng));
      v(i) = Complex(nd(rng), nd(rng));
    }
    const ScatteredSystem sc = assemble_scattered(mesh, k, p.coeffs, q);
    const FormValues f = evaluate_forms(mesh, k, p.coeffs, q, u, v);
    const Complex expected = v.dot(sc.matrix * u);
    EXPECT_LE(std::abs(f.sesquilinear - expected), 1e-11 * std::abs(expected));
    EXPECT_LE(std::abs(f.antilinear - v.dot(sc.rhs)), 1e-11 * std::abs(v.dot(sc.rhs)));
    // Hermitian data: Phi(U, V) = conj(Phi(V, U)).
    const FormValues g = evaluate_forms(mesh, k, p.coeffs, q, v, u);
    EXPECT_LE(std::abs(f.sesquilinear - std::conj(g.sesquilinear)), 1e-11 * std::abs(expected));
    const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(total);
    const FormValues z = evaluate_forms(mesh, k, p.coeffs, q, zero, zero);
    EXPECT_EQ(z.sesquilinear, Complex(0.0));
    EXPECT_EQ(z.antilinear, Complex(0.0));
  }
  EXPECT_THROW(evaluate_forms(mesh, 1, p.coeffs, q, Eigen::VectorXcd(3), Eigen::VectorXcd(3)), Error);
}

TEST(Assembly, ZeroCurrentGivesZeroLoad) {
  const TetMesh mesh = structured_cube_mesh(2);
  const auto s = assemble(mesh, 2, Coefficients::constant(1.0, -1.0, 1.0), reference_config());
  EXPECT_EQ(s.rhs.norm(), 0.0);
}

// Fields in the element space are reproduced by interpolation.
TEST(Assembly, InterpolationReproducesTheElementSpace) {
  std::vector<Vec3> verts{Vec3(0, 0, 0), Vec3(1, 0.1, 0), Vec3(0.2, 1, 0.1), Vec3(0.1, 0.2, 1), Vec3(0.9, 0.9, 0.8)};
  const TetMesh mesh(verts, {{0, 1, 2, 3}, {4, 3, 2, 1}});
  const Vec3 a(0.3, -1.0, 0.7), b(1.2, 0.4, -0.5);
  Mat3 m;
  m << 1, 2, 0, -1, 0.5, 3, 0.2, -0.4, 1;
  const std::vector<std::pair<int, VectorField>> cases{
      {1, [&](const Vec3& x) -> CVec3 { return (a + b.cross(x)).cast<Complex>(); }},
      {2, [&](const Vec3& x) -> CVec3 { return (a + m * x + x.cross(Vec3(x.y(), 2.0 * x.z(), -x.x()))).cast<Complex>(); }}};
  for (const auto& [k, field] : cases) {
    const SolutionField f(mesh, k, interpolate(mesh, k, field));
    for (int t = 0; t < 2; ++t) {
      const AffineMap map = element_map(mesh, t);
      for (const Vec3& p : {Vec3(0.1, 0.2, 0.3), Vec3(0.5, 0.1, 0.05), Vec3(0.25, 0.25, 0.25)})
        EXPECT_LE((f.value(t, p) - field(map.apply(p))).norm(), 1e-12) << "k=" << k;
    }
  }
}

// The interpolant of the gradient of a cubic has zero curl.
TEST(Assembly, GradientsAreAnnihilatedByCurlCurl) {
  const TetMesh mesh = structured_cube_mesh(3);
  const VectorField grad = [](const Vec3& x) -> CVec3 {
    return Vec3(2 * x.x() * x.y() + x.z(), x.x() * x.x() - 2 * x.y() * x.z(), x.x() - x.y() * x.y() + 1.0)
        .cast<Complex>();
  };
  for (int k : {1, 2}) {
    const Eigen::VectorXcd u = interpolate(mesh, k, grad);
    const auto sc = assemble_scattered(mesh, k, Coefficients::constant(1.0, 0.0, 1.0), reference_config());
    EXPECT_LE((sc.matrix * u).norm(), 1e-11 * sc.matrix.norm() * u.norm()) << "k=" << k;
    const SolutionField f(mesh, k, u);
    for (int t = 0; t < static_cast<int>(mesh.num_tets()); t += 7) EXPECT_LE(f.curl(t, Vec3(0.2, 0.3, 0.1)).norm(), 1e-11);
  }
}

TEST(Assembly, PecTraceVanishes) {
  const TetMesh mesh = structured_cube_mesh(2);
  const Problem p = cube_poly();
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  for (int k : {1, 2}) {
    const auto s = assemble(mesh, k, p.coeffs, reference_config());
    Eigen::VectorXcd free(static_cast<Eigen::Index>(s.n_free));
    for (auto& z : free) z = Complex(nd(rng), nd(rng));
    const SolutionField f(mesh, k, expand_free(s, free));
    for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t)
      for (int lf = 0; lf < 4; ++lf) {
        if (!mesh.is_boundary_face(mesh.tet_face(t, lf))) continue;
        const auto& fv = kLocalFaces[lf];
        const auto& rv = reference_vertices();
        const Vec3 ref = 0.2 * rv[fv[0]] + 0.3 * rv[fv[1]] + 0.5 * rv[fv[2]];
        const auto phys = mesh.tet_vertices(t);
        const Vec3 n = (phys[fv[1]] - phys[fv[0]]).cross(phys[fv[2]] - phys[fv[0]]).normalized();
        const CVec3 e = f.value(t, ref);
        EXPECT_LE((e - n.cast<Complex>().dot(e) * n.cast<Complex>()).norm(), 1e-9);
      }
  }
}

TEST(Assembly, RepeatedAssemblyIsBitIdentical) {
  const TetMesh mesh = structured_cube_mesh(3);
  const Problem p = cube_oscillatory(3);
  const auto q = QuadratureConfig::uniform(builtin_rule("pt5"));
  const auto a = assemble(mesh, 2, p.coeffs, q);
  const auto b = assemble(mesh, 2, p.coeffs, q);
  ASSERT_EQ(a.matrix.nonZeros(), b.matrix.nonZeros());
  for (Eigen::Index i = 0; i < a.matrix.nonZeros(); ++i) {
    EXPECT_EQ(a.matrix.valuePtr()[i], b.matrix.valuePtr()[i]);
    EXPECT_EQ(a.matrix.innerIndexPtr()[i], b.matrix.innerIndexPtr()[i]);
  }
  for (Eigen::Index i = 0; i < a.rhs.size(); ++i) EXPECT_EQ(a.rhs(i), b.rhs(i));
}

TEST(Assembly, DofInfoMatchesLayout) {
  const TetMesh mesh = structured_cube_mesh(1);
  const auto e = static_cast<int>(mesh.num_edges());
  const DofInfo d = dof_info(mesh, 2, 2 * e + 5);
  EXPECT_EQ(d.kind, DofEntity::Kind::face);
  EXPECT_EQ(d.entity, 2);
  EXPECT_EQ(d.moment, 1);
  EXPECT_EQ(dof_info(mesh, 1, 4).entity, 4);
  EXPECT_THROW(dof_info(mesh, 1, e), Error);
}

TEST(Assembly, WriteMatrixFormat) {
  SparseMatrix m(2, 2);
  m.insert(0, 1) = Complex(1.5, -2.0);
  m.insert(1, 0) = Complex(0.25, 0.0);
  m.makeCompressed();
  std::ostringstream out;
  write_matrix(out, m);
  EXPECT_EQ(out.str(), "0 1 1.5 -2\n1 0 0.25 0\n");
}
