#include "edgefem/reference_element.hpp"

#include <algorithm>
#include <cmath>

namespace edgefem {

namespace {

const std::array<Vec3, 4> kGradLambda{Vec3(-1.0, -1.0, -1.0), Vec3(1.0, 0.0, 0.0),
                                      Vec3(0.0, 1.0, 0.0), Vec3(0.0, 0.0, 1.0)};

std::array<double, 4> lambdas(const Vec3& p) {
  return {1.0 - p.x() - p.y() - p.z(), p.x(), p.y(), p.z()};
}

Vec3 whitney(const std::array<double, 4>& l, int a, int b) {
  return l[a] * kGradLambda[b] - l[b] * kGradLambda[a];
}

Vec3 whitney_curl(int a, int b) { return 2.0 * kGradLambda[a].cross(kGradLambda[b]); }

// 3-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 3> kLineNodes{0.11270166537925831148, 0.5, 0.88729833462074168852};
constexpr std::array<double, 3> kLineWeights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Degree-2 rule on the parameter triangle {s, t >= 0, s + t <= 1}.
constexpr std::array<std::array<double, 2>, 3> kTriNodes{
    {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}}};
constexpr double kTriWeight = 1.0 / 6.0;

}  // namespace

CurlBasis::CurlBasis(int order) : order_(order) {
  if (order != 1 && order != 2) throw Error("CurlBasis: order must be 1 or 2");
  n_dofs_ = order == 1 ? 6 : 20;
  const int edge_moments = order;

  for (int e = 0; e < 6; ++e)
    for (int j = 0; j < edge_moments; ++j) entities_.push_back({DofEntity::Kind::edge, e, j});
  if (order == 2)
    for (int f = 0; f < 4; ++f)
      for (int j = 0; j < 2; ++j) entities_.push_back({DofEntity::Kind::face, f, j});

  const auto& rv = reference_vertices();
  const int npts = 6 * 3 + (order == 2 ? 4 * 3 : 0);
  dof_weights_ = Eigen::MatrixXd::Zero(n_dofs_, 3 * npts);
  for (int e = 0; e < 6; ++e) {
    const Vec3& va = rv[kLocalEdges[e][0]];
    const Vec3 t = rv[kLocalEdges[e][1]] - va;
    for (int q = 0; q < 3; ++q) {
      const double s = kLineNodes[q];
      const int col = 3 * static_cast<int>(dof_points_.size());
      dof_points_.push_back(va + s * t);
      if (order == 1) {
        dof_weights_.block<1, 3>(e, col) = kLineWeights[q] * t.transpose();
      } else {
        dof_weights_.block<1, 3>(2 * e, col) = kLineWeights[q] * (1.0 - s) * t.transpose();
        dof_weights_.block<1, 3>(2 * e + 1, col) = kLineWeights[q] * s * t.transpose();
      }
    }
  }
  if (order == 2) {
    for (int f = 0; f < 4; ++f) {
      const Vec3& va = rv[kLocalFaces[f][0]];
      const Vec3 t0 = rv[kLocalFaces[f][1]] - va;
      const Vec3 t1 = rv[kLocalFaces[f][2]] - va;
      for (const auto& [s, t] : kTriNodes) {
        const int col = 3 * static_cast<int>(dof_points_.size());
        dof_points_.push_back(va + s * t0 + t * t1);
        dof_weights_.block<1, 3>(12 + 2 * f, col) = kTriWeight * t0.transpose();
        dof_weights_.block<1, 3>(12 + 2 * f + 1, col) = kTriWeight * t1.transpose();
      }
    }
  }

  // D(i, j) = functional i applied to spanning function j.
  Eigen::MatrixXd samples(3 * npts, n_dofs_);
  for (int p = 0; p < npts; ++p) samples.middleRows(3 * p, 3) = spanning_values(dof_points_[p]).transpose();
  const Eigen::MatrixXd d = dof_weights_ * samples;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  const auto& sv = svd.singularValues();
  spanning_condition_ = sv(0) / sv(sv.size() - 1);
  if (!(spanning_condition_ < 1e3)) throw Error("CurlBasis: DOF functionals are not unisolvent");
  coeff_ = d.inverse().transpose();
}

BasisTable CurlBasis::spanning_values(const Vec3& p) const {
  const auto l = lambdas(p);
  BasisTable out(n_dofs_, 3);
  if (order_ == 1) {
    for (int e = 0; e < 6; ++e) out.row(e) = whitney(l, kLocalEdges[e][0], kLocalEdges[e][1]);
    return out;
  }
  for (int e = 0; e < 6; ++e) {
    const int a = kLocalEdges[e][0];
    const int b = kLocalEdges[e][1];
    const Vec3 w = whitney(l, a, b);
    out.row(2 * e) = l[a] * w;
    out.row(2 * e + 1) = l[b] * w;
  }
  for (int f = 0; f < 4; ++f) {
    const int a = kLocalFaces[f][0];
    const int b = kLocalFaces[f][1];
    const int c = kLocalFaces[f][2];
    out.row(12 + 2 * f) = l[a] * whitney(l, b, c);
    out.row(12 + 2 * f + 1) = l[b] * whitney(l, c, a);
  }
  return out;
}

BasisTable CurlBasis::spanning_curls(const Vec3& p) const {
  BasisTable out(n_dofs_, 3);
  if (order_ == 1) {
    for (int e = 0; e < 6; ++e) out.row(e) = whitney_curl(kLocalEdges[e][0], kLocalEdges[e][1]);
    return out;
  }
  const auto l = lambdas(p);
  // curl(l_a w) = grad l_a x w + l_a curl w
  auto product_curl = [&](int a, int b, int c) -> Vec3 {
    return kGradLambda[a].cross(whitney(l, b, c)) + l[a] * whitney_curl(b, c);
  };
  for (int e = 0; e < 6; ++e) {
    const int a = kLocalEdges[e][0];
    const int b = kLocalEdges[e][1];
    out.row(2 * e) = product_curl(a, a, b);
    out.row(2 * e + 1) = product_curl(b, a, b);
  }
  for (int f = 0; f < 4; ++f) {
    const int a = kLocalFaces[f][0];
    const int b = kLocalFaces[f][1];
    const int c = kLocalFaces[f][2];
    out.row(12 + 2 * f) = product_curl(a, b, c);
    out.row(12 + 2 * f + 1) = product_curl(b, c, a);
  }
  return out;
}

BasisTable CurlBasis::values(const Vec3& p) const {
  if (order_ == 1) return spanning_values(p);
  return coeff_ * spanning_values(p);
}

BasisTable CurlBasis::curls(const Vec3& p) const {
  if (order_ == 1) return spanning_curls(p);
  return coeff_ * spanning_curls(p);
}

Eigen::MatrixXd CurlBasis::dof_matrix() const {
  const int npts = static_cast<int>(dof_points_.size());
  Eigen::MatrixXd samples(3 * npts, n_dofs_);
  for (int p = 0; p < npts; ++p) samples.middleRows(3 * p, 3) = values(dof_points_[p]).transpose();
  return dof_weights_ * samples;
}

BasisTable eval_basis(const CurlBasis& basis, const Vec3& p) { return basis.values(p); }

BasisTable eval_curl_basis(const CurlBasis& basis, const Vec3& p) { return basis.curls(p); }

PhysicalBasis piola_push(const BasisTable& values, const BasisTable& curls, const Mat3& jacobian) {
  const double det = jacobian.determinant();
  const double scale = jacobian.colwise().norm().prod();
  if (!(std::abs(det) > 1e-14 * scale) || !std::isfinite(det))
    throw SingularMapError("piola_push: singular Jacobian");
  // Row form of J^{-T} v and J c / det.
  return {values * jacobian.inverse(), curls * jacobian.transpose() / det};
}

PhysicalBasis piola_push(const BasisTable& values, const BasisTable& curls, const AffineMap& map) {
  return {values * map.inverse(), curls * map.jacobian().transpose() / map.det()};
}

OrientationKey orientation_key(const std::array<int, 4>& ids) {
  OrientationKey key;
  for (int e = 0; e < 6; ++e)
    key.edge_sign[e] = ids[kLocalEdges[e][0]] < ids[kLocalEdges[e][1]] ? 1 : -1;
  for (int f = 0; f < 4; ++f) {
    const auto& lf = kLocalFaces[f];
    std::array<int, 3> order{lf[0], lf[1], lf[2]};
    std::sort(order.begin(), order.end(), [&](int x, int y) { return ids[x] < ids[y]; });
    // Coordinates of each local vertex in the global frame (A, B - A, C - A).
    auto coord = [&](int v) -> Eigen::Vector2i {
      if (v == order[1]) return {1, 0};
      if (v == order[2]) return {0, 1};
      return {0, 0};
    };
    Eigen::Matrix2i t;
    t.row(0) = (coord(lf[1]) - coord(lf[0])).transpose();
    t.row(1) = (coord(lf[2]) - coord(lf[0])).transpose();
    key.face_transform[f] = t;
  }
  return key;
}

Eigen::MatrixXd orientation_matrix(const CurlBasis& basis, const OrientationKey& key) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(basis.n_dofs(), basis.n_dofs());
  if (basis.order() == 1) {
    for (int e = 0; e < 6; ++e) p(e, e) = key.edge_sign[e];
    return p;
  }
  for (int e = 0; e < 6; ++e) {
    if (key.edge_sign[e] > 0) {
      p(2 * e, 2 * e) = 1.0;
      p(2 * e + 1, 2 * e + 1) = 1.0;
    } else {
      // Reversing the edge swaps the two moment weights and flips the tangent.
      p(2 * e, 2 * e + 1) = -1.0;
      p(2 * e + 1, 2 * e) = -1.0;
    }
  }
  for (int f = 0; f < 4; ++f) p.block<2, 2>(12 + 2 * f, 12 + 2 * f) = key.face_transform[f].cast<double>();
  return p;
}

void apply_orientation(const CurlBasis& basis, const OrientationKey& key, BasisTable& table) {
  if (basis.order() == 1) {
    for (int e = 0; e < 6; ++e)
      if (key.edge_sign[e] < 0) table.row(e) *= -1.0;
    return;
  }
  for (int e = 0; e < 6; ++e) {
    if (key.edge_sign[e] > 0) continue;
    const Eigen::RowVector3d r0 = table.row(2 * e);
    table.row(2 * e) = -table.row(2 * e + 1);
    table.row(2 * e + 1) = -r0;
  }
  for (int f = 0; f < 4; ++f) {
    const auto& t = key.face_transform[f];
    const Eigen::RowVector3d r0 = table.row(12 + 2 * f);
    const Eigen::RowVector3d r1 = table.row(12 + 2 * f + 1);
    table.row(12 + 2 * f) = t(0, 0) * r0 + t(1, 0) * r1;
    table.row(12 + 2 * f + 1) = t(0, 1) * r0 + t(1, 1) * r1;
  }
}

int global_dof(const TetMesh& mesh, const CurlBasis& basis, int tet, int local) {
  const DofEntity& d = basis.dof_entities()[local];
  if (basis.order() == 1) return mesh.tet_edge(tet, d.entity);
  if (d.kind == DofEntity::Kind::edge) return 2 * mesh.tet_edge(tet, d.entity) + d.moment;
  return static_cast<int>(2 * mesh.num_edges()) + 2 * mesh.tet_face(tet, d.entity) + d.moment;
}

std::size_t global_dof_count(const TetMesh& mesh, int order) {
  if (order == 1) return mesh.num_edges();
  if (order == 2) return 2 * mesh.num_edges() + 2 * mesh.num_faces();
  throw Error("global_dof_count: order must be 1 or 2");
}

}  // namespace edgefem
