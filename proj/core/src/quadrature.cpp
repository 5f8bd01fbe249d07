#include "edgefem/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "edgefem/mesh.hpp"

namespace edgefem {

namespace {

constexpr double kInsideTol = 1e-14;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool inside_reference(const Vec3& p) {
  const double l0 = 1.0 - p.x() - p.y() - p.z();
  return p.x() >= -kInsideTol && p.y() >= -kInsideTol && p.z() >= -kInsideTol &&
         l0 >= -kInsideTol;
}

int probe_degree(const RefQuadratureRule& rule, int cap) {
  int d = -1;
  while (d < cap && verify_exactness(rule, d + 1).exact) ++d;
  return d;
}

// All distinct permutations of a barycentric 4-tuple, converted to Cartesian
// coordinates (drop the first barycentric coordinate).
void add_orbit(std::array<double, 4> bary, double weight, std::vector<Vec3>& pts,
               std::vector<double>& wts) {
  std::sort(bary.begin(), bary.end());
  do {
    pts.emplace_back(bary[1], bary[2], bary[3]);
    wts.push_back(weight);
  } while (std::next_permutation(bary.begin(), bary.end()));
}

RefQuadratureRule make_pt1_offcenter() {
  // (lambda1, lambda2, lambda3, lambda0) = (0.3, 0.3, 0.2, 0.2)
  return RefQuadratureRule::certified("pt1_offcenter", {Vec3(0.3, 0.3, 0.2)}, {1.0 / 6.0}, 0);
}

RefQuadratureRule make_pt1_centroid() {
  return RefQuadratureRule::certified("pt1_centroid", {Vec3(0.25, 0.25, 0.25)}, {1.0 / 6.0},
                                      1);
}

RefQuadratureRule make_pt4() {
  const double a = (5.0 - std::sqrt(5.0)) / 20.0;
  std::vector<Vec3> p;
  std::vector<double> w;
  add_orbit({a, a, a, 1.0 - 3.0 * a}, 1.0 / 24.0, p, w);
  return RefQuadratureRule::certified("pt4", std::move(p), std::move(w), 2);
}

RefQuadratureRule make_pt5() {
  std::vector<Vec3> p{Vec3(0.25, 0.25, 0.25)};
  std::vector<double> w{-2.0 / 15.0};
  add_orbit({1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 0.5}, 3.0 / 40.0, p, w);
  return RefQuadratureRule::certified("pt5", std::move(p), std::move(w), 3);
}

// Keast-family symmetric 15-point rule, degree 5: centroid, face centroids,
// one (a,a,a,1-3a) orbit and one (a,a,1/2-a,1/2-a) orbit.
RefQuadratureRule make_pt15() {
  std::vector<Vec3> p;
  std::vector<double> w;
  add_orbit({0.25, 0.25, 0.25, 0.25}, 0.030283678097089175806, p, w);
  add_orbit({0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.0060267857142857142857, p, w);
  add_orbit({1.0 / 11.0, 1.0 / 11.0, 1.0 / 11.0, 8.0 / 11.0}, 0.011645249086028969411, p, w);
  const double a = 0.06655015357366429824;
  add_orbit({a, a, 0.5 - a, 0.5 - a}, 0.010949141561386459346, p, w);
  return RefQuadratureRule::certified("pt15", std::move(p), std::move(w), 5);
}

// Symmetric 31-point rule of degree 7 (Keast orbit structure). Values solved
// from the invariant moment equations in 40-digit arithmetic.
struct Orbit {
  std::array<double, 4> bary;
  double weight;
};

const std::array<Orbit, 6> kHighOrbits{{
    {{0.25, 0.25, 0.25, 0.25}, 0.0182642234661088202912},
    {{0.0, 0.0, 0.5, 0.5}, 0.00097001763668430335097},
    {{0.07821319233031806437399, 0.07821319233031806437399, 0.07821319233031806437399,
      1.0 - 3.0 * 0.07821319233031806437399},
     0.01059994152441368691641},
    {{0.1218432166639051746522, 0.1218432166639051746522, 0.1218432166639051746522,
      1.0 - 3.0 * 0.1218432166639051746522},
     -0.06251774011433185169147},
    {{0.3325391644464206241529, 0.3325391644464206241529, 0.3325391644464206241529,
      1.0 - 3.0 * 0.3325391644464206241529},
     0.004891425263073499384796},
    {{0.1, 0.1, 0.2, 0.6}, 0.02755731922398589065256},
}};

RefQuadratureRule make_high() {
  std::vector<Vec3> p;
  std::vector<double> w;
  for (const auto& orbit : kHighOrbits) add_orbit(orbit.bary, orbit.weight, p, w);
  return RefQuadratureRule::certified("high", std::move(p), std::move(w), 7);
}

}  // namespace

RefQuadratureRule::RefQuadratureRule(std::string label, std::vector<Vec3> points,
                                     std::vector<double> weights, int degree)
    : points_(std::move(points)),
      weights_(std::move(weights)),
      degree_(degree),
      label_(std::move(label)) {}

RefQuadratureRule RefQuadratureRule::certified(std::string label, std::vector<Vec3> points,
                                               std::vector<double> weights,
                                               int declared_degree) {
  if (points.size() != weights.size() || points.empty())
    throw Error("quadrature rule '" + label + "': point/weight count mismatch");
  for (const auto& p : points)
    if (!inside_reference(p))
      throw Error("quadrature rule '" + label + "': point outside the reference tetrahedron");
  RefQuadratureRule rule(label, std::move(points), std::move(weights), declared_degree);
  const auto report = verify_exactness(rule, declared_degree);
  if (!report.exact) {
    std::ostringstream msg;
    msg << "quadrature rule '" << label << "' fails certification at degree " << declared_degree
        << " (monomial x^" << report.worst_monomial[0] << " y^" << report.worst_monomial[1]
        << " z^" << report.worst_monomial[2] << ", relative error " << report.worst_error << ")";
    throw Error(msg.str());
  }
  return rule;
}

RefQuadratureRule RefQuadratureRule::probed(std::string label, std::vector<Vec3> points,
                                            std::vector<double> weights) {
  if (points.size() != weights.size() || points.empty())
    throw Error("quadrature rule '" + label + "': point/weight count mismatch");
  for (const auto& p : points)
    if (!inside_reference(p))
      throw Error("quadrature rule '" + label + "': point outside the reference tetrahedron");
  RefQuadratureRule rule(std::move(label), std::move(points), std::move(weights), -1);
  rule.degree_ = probe_degree(rule, 60);
  return rule;
}

RefQuadratureRule RefQuadratureRule::scaled(double factor) const {
  std::vector<double> w = weights_;
  for (auto& x : w) x *= factor;
  std::ostringstream lbl;
  lbl << label_ << "*" << factor;
  return probed(lbl.str(), points_, std::move(w));
}

double reference_monomial_integral(int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

ExactnessReport verify_exactness(const RefQuadratureRule& rule, int degree) {
  ExactnessReport report;
  for (int total = 0; total <= degree; ++total) {
    for (int a = total; a >= 0; --a) {
      for (int b = total - a; b >= 0; --b) {
        const int c = total - a - b;
        const double exact = reference_monomial_integral(a, b, c);
        const double approx = integrate_ref(rule, [&](const Vec3& p) {
          return std::pow(p.x(), a) * std::pow(p.y(), b) * std::pow(p.z(), c);
        });
        const double rel = std::abs(approx - exact) / std::max(1.0, std::abs(exact));
        if (rel > report.worst_error) {
          report.worst_error = rel;
          report.worst_monomial = {a, b, c};
        }
        if (rel > 1e-12) report.exact = false;
      }
    }
  }
  return report;
}

const std::vector<std::string>& builtin_labels() {
  static const std::vector<std::string> labels{"pt1_offcenter", "pt1_centroid", "pt4",
                                               "pt5",           "pt15",         "high"};
  return labels;
}

const RefQuadratureRule& builtin_rule(std::string_view label) {
  static const std::map<std::string, RefQuadratureRule, std::less<>> rules = [] {
    std::map<std::string, RefQuadratureRule, std::less<>> m;
    m.emplace("pt1_offcenter", make_pt1_offcenter());
    m.emplace("pt1_centroid", make_pt1_centroid());
    m.emplace("pt4", make_pt4());
    m.emplace("pt5", make_pt5());
    m.emplace("pt15", make_pt15());
    m.emplace("high", make_high());
    return m;
  }();
  const auto it = rules.find(label);
  if (it == rules.end()) throw Error("unknown quadrature rule '" + std::string(label) + "'");
  return it->second;
}

void gauss_jacobi_unit(int n, double alpha, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  if (n < 1) throw Error("gauss_jacobi_unit: n must be >= 1");
  // Golub-Welsch on [-1, 1] for the weight (1 - x)^alpha, beta = 0.
  const double beta = 0.0;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + alpha + beta;
    jac(k, k) = (k == 0) ? (beta - alpha) / (alpha + beta + 2.0)
                         : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double kk = k + 1.0;
      const double t = 2.0 * kk + alpha + beta;
      const double b2 = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + alpha + beta) /
                        (t * t * (t + 1.0) * (t - 1.0));
      jac(k, k + 1) = jac(k + 1, k) = std::sqrt(b2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  const double mu0 = std::pow(2.0, alpha + beta + 1.0) * std::tgamma(alpha + 1.0) *
                     std::tgamma(beta + 1.0) / std::tgamma(alpha + beta + 2.0);
  nodes.resize(n);
  weights.resize(n);
  const double to_unit = std::pow(2.0, alpha + 1.0);
  for (int i = 0; i < n; ++i) {
    const double x = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    nodes[i] = 0.5 * (1.0 + x);
    weights[i] = mu0 * v0 * v0 / to_unit;
  }
}

RefQuadratureRule tensorized_gl(int n) {
  if (n < 1) throw Error("tensorized_gl: n must be >= 1");
  std::vector<double> t1, w1, t2, w2;
  gauss_jacobi_unit(n, 2.0, t1, w1);
  gauss_jacobi_unit(n, 0.0, t2, w2);
  std::vector<Vec3> pts;
  std::vector<double> wts;
  pts.reserve(n * n * n);
  // z = t1, y = t2 (1 - t1), x = t3 (1 - t1)(1 - t2); Jacobian (1 - t1)^2 (1 - t2).
  // The (1 - t1)^2 factor is carried by the Jacobi weight.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const double z = t1[i];
        const double y = t2[j] * (1.0 - t1[i]);
        const double x = t2[l] * (1.0 - t1[i]) * (1.0 - t2[j]);
        pts.emplace_back(x, y, z);
        wts.push_back(w1[i] * w2[j] * w2[l] * (1.0 - t2[j]));
      }
  return RefQuadratureRule::probed("tgl" + std::to_string(n), std::move(pts), std::move(wts));
}

RefQuadratureRule collapsed_gauss_legendre(int n) {
  if (n < 1) throw Error("collapsed_gauss_legendre: n must be >= 1");
  std::vector<double> t, w;
  gauss_jacobi_unit(n, 0.0, t, w);
  std::vector<Vec3> pts;
  std::vector<double> wts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const double z = t[i];
        const double y = t[j] * (1.0 - t[i]);
        const double x = t[l] * (1.0 - t[i]) * (1.0 - t[j]);
        pts.emplace_back(x, y, z);
        wts.push_back(w[i] * w[j] * w[l] * (1.0 - t[i]) * (1.0 - t[i]) * (1.0 - t[j]));
      }
  return RefQuadratureRule::probed("cgl" + std::to_string(n), std::move(pts), std::move(wts));
}

RefQuadratureRule rule_for_degree(int degree) {
  if (degree < 0) degree = 0;
  // Cheapest first; pt1_offcenter is skipped in favour of the centroid.
  for (const char* label : {"pt1_centroid", "pt4", "pt5", "pt15", "high"}) {
    const auto& r = builtin_rule(label);
    if (r.exactness_degree() >= degree) return r;
  }
  for (int n = 1;; ++n) {
    auto r = tensorized_gl(n);
    if (r.exactness_degree() >= degree) return r;
  }
}

RefQuadratureRule rule_by_name(std::string_view name) {
  auto parse_int = [&](std::string_view digits) {
    int v = 0;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size())
      throw Error("unknown quadrature rule '" + std::string(name) + "'");
    return v;
  };
  if (name.rfind("tgl", 0) == 0) return tensorized_gl(parse_int(name.substr(3)));
  if (name.rfind("cgl", 0) == 0) return collapsed_gauss_legendre(parse_int(name.substr(3)));
  if (name.rfind("deg", 0) == 0) return rule_for_degree(parse_int(name.substr(3)));
  return builtin_rule(name);
}

MappedQuadrature map_affine(const RefQuadratureRule& rule, const AffineMap& map) {
  MappedQuadrature q;
  q.points.reserve(rule.size());
  q.weights.reserve(rule.size());
  const double scale = std::abs(map.det());
  for (std::size_t l = 0; l < rule.size(); ++l) {
    q.points.push_back(map.apply(rule.points()[l]));
    q.weights.push_back(scale * rule.weights()[l]);
  }
  return q;
}

MappedQuadrature map_curved(const RefQuadratureRule& rule, const CurvedMap& map) {
  MappedQuadrature q;
  q.points.reserve(rule.size());
  q.weights.reserve(rule.size());
  for (std::size_t l = 0; l < rule.size(); ++l) {
    const Vec3& p = rule.points()[l];
    const double det = map.det(p);
    if (!(det > 0.0))
      throw SingularMapError("curved map has non-positive Jacobian determinant at a rule point");
    q.points.push_back(map.apply(p));
    q.weights.push_back(det * rule.weights()[l]);
  }
  return q;
}

void write_rule(std::ostream& out, const RefQuadratureRule& rule) {
  const auto old_precision = out.precision(17);
  out << rule.label() << ' ' << rule.exactness_degree() << ' ' << rule.size() << '\n';
  for (std::size_t l = 0; l < rule.size(); ++l) {
    const Vec3& p = rule.points()[l];
    out << p.x() << ' ' << p.y() << ' ' << p.z() << ' ' << rule.weights()[l] << '\n';
  }
  out.precision(old_precision);
}

std::vector<RefQuadratureRule> read_rules(std::istream& in) {
  std::vector<RefQuadratureRule> rules;
  std::string label;
  while (in >> label) {
    int degree = 0;
    std::size_t npoints = 0;
    if (!(in >> degree >> npoints) || npoints == 0)
      throw Error("rule file: bad header for rule '" + label + "'");
    std::vector<Vec3> pts(npoints);
    std::vector<double> wts(npoints);
    for (std::size_t l = 0; l < npoints; ++l)
      if (!(in >> pts[l].x() >> pts[l].y() >> pts[l].z() >> wts[l]))
        throw Error("rule file: truncated point table for rule '" + label + "'");
    rules.push_back(RefQuadratureRule::certified(label, std::move(pts), std::move(wts), degree));
  }
  return rules;
}

}  // namespace edgefem
