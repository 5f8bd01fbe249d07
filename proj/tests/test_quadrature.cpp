#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "edgefem/mesh.hpp"
#include "edgefem/quadrature.hpp"

using namespace edgefem;

namespace {

// Independent closed form through the Dirichlet integral written with Gamma
// functions.
double dirichlet_integral(int a, int b, int c) {
  return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) * std::tgamma(c + 1.0) / std::tgamma(a + b + c + 4.0);
}

Mat3 random_jacobian(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat3 j;
  do {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) j(r, c) = u(rng);
  } while (std::abs(j.determinant()) < 0.1);
  return j;
}

}  // namespace

TEST(Quadrature, MonomialIntegralMatchesGammaForm) {
  EXPECT_NEAR(reference_monomial_integral(0, 0, 0), 1.0 / 6.0, 1e-16);
  EXPECT_NEAR(reference_monomial_integral(1, 0, 0), 1.0 / 24.0, 1e-16);
  EXPECT_NEAR(reference_monomial_integral(2, 0, 0), 1.0 / 60.0, 1e-16);
  EXPECT_NEAR(reference_monomial_integral(1, 1, 1), 1.0 / 720.0, 1e-16);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c)
        EXPECT_NEAR(reference_monomial_integral(a, b, c), dirichlet_integral(a, b, c),
                    1e-14 * dirichlet_integral(a, b, c));
}

TEST(Quadrature, CentroidRule) {
  const auto& r = builtin_rule("pt1_centroid");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r.points()[0].isApprox(Vec3(0.25, 0.25, 0.25)));
  EXPECT_DOUBLE_EQ(r.weights()[0], 1.0 / 6.0);
  EXPECT_EQ(r.exactness_degree(), 1);
}

TEST(Quadrature, OffCenterRule) {
  const auto& r = builtin_rule("pt1_offcenter");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r.points()[0].isApprox(Vec3(0.3, 0.3, 0.2)));
  EXPECT_DOUBLE_EQ(r.weights()[0], 1.0 / 6.0);
  EXPECT_EQ(r.exactness_degree(), 0);
  EXPECT_TRUE(verify_exactness(r, 0).exact);
}

TEST(Quadrature, FivePointRuleHasOneNegativeWeight) {
  const auto& r = builtin_rule("pt5");
  ASSERT_EQ(r.size(), 5u);
  EXPECT_EQ(std::count_if(r.weights().begin(), r.weights().end(), [](double w) { return w < 0.0; }), 1);
  EXPECT_EQ(r.exactness_degree(), 3);
}

TEST(Quadrature, DeclaredDegreesAndSizes) {
  EXPECT_EQ(builtin_rule("pt4").exactness_degree(), 2);
  EXPECT_EQ(builtin_rule("pt15").size(), 15u);
  EXPECT_EQ(builtin_rule("pt15").exactness_degree(), 5);
  EXPECT_GE(builtin_rule("high").exactness_degree(), 7);
  EXPECT_THROW(builtin_rule("pt7"), Error);
}

// Every built-in rule: exact at its degree against the closed form, off by
// more than 1e-6 somewhere at degree + 1, weights sum to 1/6, points inside.
TEST(Quadrature, BuiltinRulesAreCertifiedAndTight) {
  for (const auto& label : builtin_labels()) {
    const auto& r = builtin_rule(label);
    SCOPED_TRACE(label);
    const int d = r.exactness_degree();
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b)
        for (int c = 0; a + b + c <= d; ++c) {
          const double q = integrate_ref(r, [&](const Vec3& p) {
            return std::pow(p.x(), a) * std::pow(p.y(), b) * std::pow(p.z(), c);
          });
          const double exact = dirichlet_integral(a, b, c);
          EXPECT_LE(std::abs(q - exact), 1e-12 * std::max(1.0, exact));
        }
    EXPECT_GT(verify_exactness(r, d + 1).worst_error, 1e-6);
    double sum = 0.0;
    for (double w : r.weights()) sum += w;
    EXPECT_NEAR(sum, 1.0 / 6.0, 1e-14);
    for (const Vec3& p : r.points()) {
      EXPECT_GE(p.minCoeff(), -1e-15);
      EXPECT_LE(p.sum(), 1.0 + 1e-15);
    }
  }
}

TEST(Quadrature, TensorizedDegreesAreCertified) {
  const auto t1 = tensorized_gl(1);
  EXPECT_EQ(t1.size(), 1u);
  EXPECT_GE(t1.exactness_degree(), 0);
  const auto t2 = tensorized_gl(2);
  EXPECT_EQ(t2.size(), 8u);
  EXPECT_EQ(t2.exactness_degree(), 2);
  const auto t6 = tensorized_gl(6);
  EXPECT_EQ(t6.size(), 216u);
  EXPECT_GE(t6.exactness_degree(), 7);
  for (int n = 1; n <= 6; ++n) {
    const auto t = tensorized_gl(n);
    EXPECT_TRUE(verify_exactness(t, t.exactness_degree()).exact);
    EXPECT_FALSE(verify_exactness(t, t.exactness_degree() + 1).exact);
  }
}

TEST(Quadrature, CollapsedGaussLegendreLosesDegrees) {
  EXPECT_EQ(collapsed_gauss_legendre(2).exactness_degree(), 1);
  EXPECT_EQ(collapsed_gauss_legendre(3).exactness_degree(), 3);
}

TEST(Quadrature, RuleForDegree) {
  EXPECT_EQ(rule_for_degree(0).label(), "pt1_centroid");
  EXPECT_EQ(rule_for_degree(3).label(), "pt5");
  const auto r8 = rule_for_degree(8);
  EXPECT_GE(r8.exactness_degree(), 8);
  EXPECT_TRUE(verify_exactness(r8, 8).exact);
  for (int d = 0; d <= 12; ++d) EXPECT_GE(rule_for_degree(d).exactness_degree(), d);
}

TEST(Quadrature, RuleByName) {
  EXPECT_EQ(rule_by_name("pt4").label(), "pt4");
  EXPECT_EQ(rule_by_name("tgl3").size(), 27u);
  EXPECT_GE(rule_by_name("deg6").exactness_degree(), 6);
  EXPECT_THROW(rule_by_name("bogus"), Error);
  EXPECT_THROW(rule_by_name("tgl0"), Error);
}

TEST(Quadrature, IntegrateRefExamples) {
  const auto& c = builtin_rule("pt1_centroid");
  EXPECT_NEAR(integrate_ref(c, [](const Vec3&) { return 1.0; }), 1.0 / 6.0, 1e-16);
  EXPECT_NEAR(integrate_ref(c, [](const Vec3& p) { return p.x(); }), 1.0 / 24.0, 1e-16);
  EXPECT_NEAR(integrate_ref(c, [](const Vec3& p) { return p.x() * p.x(); }), 1.0 / 96.0, 1e-16);
  for (const auto& label : builtin_labels())
    EXPECT_NEAR(integrate_ref(builtin_rule(label), [](const Vec3&) { return 1.0; }), 1.0 / 6.0, 1e-14);
}

TEST(Quadrature, VerifyExactnessReportsWorstMonomial) {
  const auto& c = builtin_rule("pt1_centroid");
  EXPECT_TRUE(verify_exactness(c, 1).exact);
  const auto rep = verify_exactness(c, 2);
  EXPECT_FALSE(rep.exact);
  const auto m = rep.worst_monomial;
  EXPECT_EQ(m[0] + m[1] + m[2], 2);
  EXPECT_EQ(std::max({m[0], m[1], m[2]}), 2);
  EXPECT_NEAR(rep.worst_error, 1.0 / 60.0 - 1.0 / 96.0, 1e-15);
}

TEST(Quadrature, CertifiedRejectsWrongDegree) {
  EXPECT_THROW(RefQuadratureRule::certified("bad", {Vec3(0.25, 0.25, 0.25)}, {1.0 / 6.0}, 2), Error);
  EXPECT_THROW(RefQuadratureRule::certified("outside", {Vec3(0.9, 0.9, 0.2)}, {1.0 / 6.0}, 0), Error);
}

TEST(Quadrature, ScaledRuleDoublesIntegrals) {
  const auto r = builtin_rule("pt4").scaled(2.0);
  EXPECT_NEAR(integrate_ref(r, [](const Vec3& p) { return p.y(); }), 2.0 / 24.0, 1e-15);
}

TEST(Quadrature, MapAffineIdentityAndScaling) {
  const auto& r = builtin_rule("pt5");
  const auto id = map_affine(r, AffineMap(Vec3::Zero(), Mat3::Identity()));
  for (std::size_t l = 0; l < r.size(); ++l) {
    EXPECT_TRUE(id.points[l].isApprox(r.points()[l]));
    EXPECT_DOUBLE_EQ(id.weights[l], r.weights()[l]);
  }
  const auto twice = map_affine(r, AffineMap(Vec3::Zero(), 2.0 * Mat3::Identity()));
  for (std::size_t l = 0; l < r.size(); ++l) EXPECT_NEAR(twice.weights[l], 8.0 * r.weights()[l], 1e-15);
  EXPECT_THROW(AffineMap(Vec3::Zero(), Mat3::Zero()), SingularMapError);
}

// Random affine tets: weights sum to the volume from the vertex determinant,
// and polynomials up to the rule degree integrate exactly (oracle: the same
// polynomial pulled back and integrated by tensorized_gl(8)).
TEST(Quadrature, MapAffinePreservesExactness) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto oracle = tensorized_gl(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec3 x0(u(rng), u(rng), u(rng));
    const AffineMap map(x0, random_jacobian(rng));
    const double volume = std::abs(map.jacobian().determinant()) / 6.0;
    for (const auto& label : builtin_labels()) {
      const auto& r = builtin_rule(label);
      const auto q = map_affine(r, map);
      double sum = 0.0;
      for (double w : q.weights) sum += w;
      EXPECT_NEAR(sum, volume, 1e-13 * volume);
      const int d = r.exactness_degree();
      std::vector<double> coef(4);
      for (double& c : coef) c = u(rng);
      auto poly = [&](const Vec3& x) {
        const double s = coef[0] * x.x() + coef[1] * x.y() + coef[2] * x.z() + coef[3];
        return std::pow(s, d) + 0.5 * std::pow(x.x() - x.z(), std::max(0, d - 1));
      };
      double quad = 0.0;
      for (std::size_t l = 0; l < q.weights.size(); ++l) quad += q.weights[l] * poly(q.points[l]);
      const double exact =
          std::abs(map.det()) * integrate_ref(oracle, [&](const Vec3& p) { return poly(map.apply(p)); });
      EXPECT_NEAR(quad, exact, 1e-11 * std::max(1.0, std::abs(exact))) << label;
    }
  }
}

TEST(Quadrature, MapCurvedReducesToAffine) {
  std::mt19937_64 rng(5);
  const AffineMap map(Vec3(0.3, -0.1, 0.2), random_jacobian(rng));
  const AffineMap positive = map.det() > 0 ? map : AffineMap(map.origin(), -map.jacobian());
  const CurvedMap curved = CurvedMap::from_affine(positive);
  for (const auto& label : builtin_labels()) {
    const auto a = map_affine(builtin_rule(label), positive);
    const auto c = map_curved(builtin_rule(label), curved);
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
      EXPECT_LE((a.points[l] - c.points[l]).norm(), 1e-13);
      EXPECT_NEAR(a.weights[l], c.weights[l], 1e-13);
    }
  }
}

TEST(Quadrature, MapCurvedUsesPointwiseJacobian) {
  auto cp = quadratic_reference_nodes();
  cp[4 + 3] += Vec3(0.1, 0.1, 0.1);
  const CurvedMap map(cp);
  const auto& c = builtin_rule("pt1_centroid");
  const auto q = map_curved(c, map);
  EXPECT_NEAR(q.weights[0], map.det(Vec3(0.25, 0.25, 0.25)) / 6.0, 1e-15);
  // det J is a cubic polynomial: any rule of degree >= 3 gives the volume.
  const auto volume_of = [&](const RefQuadratureRule& r) {
    double s = 0.0;
    for (double w : map_curved(r, map).weights) s += w;
    return s;
  };
  const double reference = volume_of(tensorized_gl(8));
  EXPECT_NEAR(volume_of(builtin_rule("pt5")), reference, 1e-14);
  EXPECT_NEAR(volume_of(builtin_rule("pt15")), reference, 1e-14);
  EXPECT_GT(std::abs(volume_of(builtin_rule("pt1_offcenter")) - reference), 1e-6);
}

TEST(Quadrature, RuleTextRoundTrip) {
  std::stringstream ss;
  write_rule(ss, builtin_rule("pt15"));
  write_rule(ss, tensorized_gl(3));
  const auto rules = read_rules(ss);
  ASSERT_EQ(rules.size(), 2u);
  EXPECT_EQ(rules[0].label(), "pt15");
  EXPECT_EQ(rules[0].exactness_degree(), 5);
  for (std::size_t l = 0; l < rules[0].size(); ++l) {
    EXPECT_EQ(rules[0].weights()[l], builtin_rule("pt15").weights()[l]);
    EXPECT_EQ(rules[0].points()[l], builtin_rule("pt15").points()[l]);
  }
  EXPECT_EQ(rules[1].size(), 27u);
}

TEST(Quadrature, ReadRulesRejectsOverstatedDegree) {
  std::stringstream ss("fake 2 1\n0.25 0.25 0.25 0.16666666666666667\n");
  EXPECT_THROW(read_rules(ss), Error);
  std::stringstream empty;
  EXPECT_TRUE(read_rules(empty).empty());
}

TEST(Quadrature, GaussJacobiIntegratesWeightedPolynomials) {
  std::vector<double> x;
  std::vector<double> w;
  gauss_jacobi_unit(4, 2.0, x, w);
  // int_0^1 (1 - t)^2 t^j dt = 2 j! / (j + 3)!
  for (int j = 0; j <= 7; ++j) {
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += w[i] * std::pow(x[i], j);
    EXPECT_NEAR(q, 2.0 * std::tgamma(j + 1.0) / std::tgamma(j + 4.0), 1e-15);
  }
}
