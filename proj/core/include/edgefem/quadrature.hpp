#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "edgefem/types.hpp"

namespace edgefem {

class AffineMap;
class CurvedMap;

/// Quadrature rule on the reference tetrahedron conv{0, e1, e2, e3}.
///
/// Rules are immutable once built. The exactness degree stored on a rule is
/// always one that `verify_exactness` has confirmed, either at a declared
/// value (tabulated rules) or by probing upward (tensorized rules). A rule
/// with degree -1 does not even integrate constants.
class RefQuadratureRule {
 public:
  /// Builds a tabulated rule and certifies it at `declared_degree`.
  /// Throws edgefem::Error if certification fails or a point lies outside
  /// the closed reference tetrahedron.
  static RefQuadratureRule certified(std::string label, std::vector<Vec3> points,
                                     std::vector<double> weights, int declared_degree);

  /// Builds a rule whose degree is found by running the certifier upward
  /// from 0 until the first failure.
  static RefQuadratureRule probed(std::string label, std::vector<Vec3> points,
                                  std::vector<double> weights);

  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  int exactness_degree() const { return degree_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return weights_.size(); }

  /// Copy of this rule with every weight multiplied by `factor`. The copy
  /// keeps the label suffixed with "*factor" and is re-probed.
  RefQuadratureRule scaled(double factor) const;

 private:
  RefQuadratureRule(std::string label, std::vector<Vec3> points, std::vector<double> weights,
                    int degree);

  std::vector<Vec3> points_;
  std::vector<double> weights_;
  int degree_ = -1;
  std::string label_;
};

/// Quadrature pushed to a physical element.
struct MappedQuadrature {
  std::vector<Vec3> points;
  std::vector<double> weights;
};

struct ExactnessReport {
  bool exact = true;
  /// Exponents (a, b, c) of the monomial with the largest relative error.
  std::array<int, 3> worst_monomial{0, 0, 0};
  double worst_error = 0.0;
};

/// Exact integral of x^a y^b z^c over the reference tetrahedron,
/// a! b! c! / (a + b + c + 3)!.
double reference_monomial_integral(int a, int b, int c);

/// Checks every monomial of total degree <= d against the closed form with
/// tolerance 1e-12 * max(1, |exact|).
ExactnessReport verify_exactness(const RefQuadratureRule& rule, int degree);

/// Labels accepted by builtin_rule.
const std::vector<std::string>& builtin_labels();

/// Tabulated rules: pt1_offcenter (0), pt1_centroid (1), pt4 (2), pt5 (3),
/// pt15 (5), high (7, 31 points). Throws on an unknown label.
const RefQuadratureRule& builtin_rule(std::string_view label);

/// Conical-product rule with n points per direction: Gauss-Jacobi(2, 0) in
/// the doubly collapsed direction, Gauss-Legendre in the other two, with the
/// remaining collapsed-map Jacobian folded into the weights. Degree is
/// certified, never assumed.
RefQuadratureRule tensorized_gl(int n);

/// Plain n x n x n Gauss-Legendre rule pushed through the collapsed map with
/// the full Jacobian multiplied into the weights (degree 2n - 3).
RefQuadratureRule collapsed_gauss_legendre(int n);

/// Cheapest available rule with exactness degree >= d.
RefQuadratureRule rule_for_degree(int degree);

/// Resolves a rule name used in configuration files: any builtin label,
/// "tgl<n>" for tensorized_gl(n), "cgl<n>" for collapsed_gauss_legendre(n),
/// or "deg<d>" for rule_for_degree(d).
RefQuadratureRule rule_by_name(std::string_view name);

template <class F>
auto integrate_ref(const RefQuadratureRule& rule, F&& f) {
  using R = decltype(f(rule.points().front()));
  R sum{};
  for (std::size_t l = 0; l < rule.size(); ++l) sum += rule.weights()[l] * f(rule.points()[l]);
  return sum;
}

MappedQuadrature map_affine(const RefQuadratureRule& rule, const AffineMap& map);

/// Pointwise-Jacobian weights. Throws SingularMapError when det J <= 0 at any
/// rule point.
MappedQuadrature map_curved(const RefQuadratureRule& rule, const CurvedMap& map);

/// Plain-text dump: "label degree npoints" then one "x y z w" row per point,
/// 17 significant digits.
void write_rule(std::ostream& out, const RefQuadratureRule& rule);

/// Inverse of write_rule. Each parsed rule is certified at its stated degree.
std::vector<RefQuadratureRule> read_rules(std::istream& in);

/// Gauss-Jacobi nodes and weights on [0, 1] for the weight (1 - t)^alpha.
/// alpha = 0 gives Gauss-Legendre.
void gauss_jacobi_unit(int n, double alpha, std::vector<double>& nodes,
                       std::vector<double>& weights);

}  // namespace edgefem
