#include "edgefem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace edgefem {

namespace {

const std::array<Vec3, 4> kBaryGradients{Vec3(-1.0, -1.0, -1.0), Vec3(1.0, 0.0, 0.0),
                                         Vec3(0.0, 1.0, 0.0), Vec3(0.0, 0.0, 1.0)};

std::array<double, 4> barycentric(const Vec3& p) {
  return {1.0 - p.x() - p.y() - p.z(), p.x(), p.y(), p.z()};
}

double signed_volume(const std::array<Vec3, 4>& v) {
  Mat3 m;
  m.col(0) = v[1] - v[0];
  m.col(1) = v[2] - v[0];
  m.col(2) = v[3] - v[0];
  return m.determinant() / 6.0;
}

double tet_diameter(const std::array<Vec3, 4>& v) {
  double d = 0.0;
  for (const auto& [a, b] : kLocalEdges) d = std::max(d, (v[a] - v[b]).norm());
  return d;
}

template <std::size_t N>
int lookup(const std::vector<std::array<int, N>>& sorted, std::array<int, N> key) {
  std::sort(key.begin(), key.end());
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), key);
  if (it == sorted.end() || *it != key) return -1;
  return static_cast<int>(it - sorted.begin());
}

}  // namespace

const std::array<Vec3, 4>& reference_vertices() {
  static const std::array<Vec3, 4> v{Vec3(0.0, 0.0, 0.0), Vec3(1.0, 0.0, 0.0),
                                     Vec3(0.0, 1.0, 0.0), Vec3(0.0, 0.0, 1.0)};
  return v;
}

// ---------------------------------------------------------------------------
AffineMap::AffineMap(const Vec3& origin, const Mat3& jacobian)
    : origin_(origin), jac_(jacobian), det_(jacobian.determinant()) {
  const double scale = jacobian.colwise().norm().prod();
  if (!(std::abs(det_) > 1e-14 * scale) || !std::isfinite(det_))
    throw SingularMapError("affine element map has a singular Jacobian");
  inv_ = jac_.inverse();
  inv_t_ = inv_.transpose();
}

AffineMap AffineMap::from_vertices(const std::array<Vec3, 4>& v) {
  Mat3 j;
  j.col(0) = v[1] - v[0];
  j.col(1) = v[2] - v[0];
  j.col(2) = v[3] - v[0];
  return AffineMap(v[0], j);
}

// ---------------------------------------------------------------------------
const std::array<Vec3, 10>& quadratic_reference_nodes() {
  static const std::array<Vec3, 10> nodes = [] {
    std::array<Vec3, 10> n;
    const auto& rv = reference_vertices();
    for (int i = 0; i < 4; ++i) n[i] = rv[i];
    for (int e = 0; e < 6; ++e) n[4 + e] = 0.5 * (rv[kLocalEdges[e][0]] + rv[kLocalEdges[e][1]]);
    return n;
  }();
  return nodes;
}

CurvedMap::CurvedMap(const std::array<Vec3, 10>& control_points) : nodes_(control_points) {
  constexpr int kLattice = 2 * kDegree;
  for (int i = 0; i <= kLattice; ++i)
    for (int j = 0; i + j <= kLattice; ++j)
      for (int k = 0; i + j + k <= kLattice; ++k) {
        const Vec3 p(double(i) / kLattice, double(j) / kLattice, double(k) / kLattice);
        if (!(det(p) > 0.0))
          throw SingularMapError("curved map has a non-positive Jacobian determinant");
      }
}

CurvedMap CurvedMap::from_affine(const AffineMap& map) {
  std::array<Vec3, 10> cp;
  const auto& ref = quadratic_reference_nodes();
  for (int i = 0; i < 10; ++i) cp[i] = map.apply(ref[i]);
  return CurvedMap(cp);
}

Vec3 CurvedMap::apply(const Vec3& ref) const {
  const auto l = barycentric(ref);
  Vec3 x = Vec3::Zero();
  for (int i = 0; i < 4; ++i) x += l[i] * (2.0 * l[i] - 1.0) * nodes_[i];
  for (int e = 0; e < 6; ++e) x += 4.0 * l[kLocalEdges[e][0]] * l[kLocalEdges[e][1]] * nodes_[4 + e];
  return x;
}

Mat3 CurvedMap::jacobian(const Vec3& ref) const {
  const auto l = barycentric(ref);
  Mat3 j = Mat3::Zero();
  for (int i = 0; i < 4; ++i) j += nodes_[i] * ((4.0 * l[i] - 1.0) * kBaryGradients[i]).transpose();
  for (int e = 0; e < 6; ++e) {
    const int a = kLocalEdges[e][0];
    const int b = kLocalEdges[e][1];
    const Vec3 grad = 4.0 * (l[a] * kBaryGradients[b] + l[b] * kBaryGradients[a]);
    j += nodes_[4 + e] * grad.transpose();
  }
  return j;
}

CurvedMap curved_map(const std::array<Vec3, 10>& control_points) {
  return CurvedMap(control_points);
}

// ---------------------------------------------------------------------------
TetMesh::TetMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets)
    : vertices_(std::move(vertices)), tets_(std::move(tets)) {
  if (tets_.empty()) throw Error("mesh has no tetrahedra");
  const int nv = static_cast<int>(vertices_.size());
  for (auto& t : tets_) {
    for (int id : t)
      if (id < 0 || id >= nv) throw Error("tetrahedron references a missing vertex");
    std::array<int, 4> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("tetrahedron with repeated vertices");
    std::array<Vec3, 4> v{vertices_[t[0]], vertices_[t[1]], vertices_[t[2]], vertices_[t[3]]};
    const double vol = signed_volume(v);
    const double diam = tet_diameter(v);
    if (!(std::abs(vol) > 1e-14 * diam * diam * diam)) throw Error("degenerate tetrahedron");
    if (vol < 0.0) std::swap(t[2], t[3]);
    h_ = std::max(h_, diam);
  }

  for (const auto& t : tets_) {
    for (const auto& [a, b] : kLocalEdges) edges_.push_back({std::min(t[a], t[b]), std::max(t[a], t[b])});
    for (const auto& f : kLocalFaces) {
      std::array<int, 3> key{t[f[0]], t[f[1]], t[f[2]]};
      std::sort(key.begin(), key.end());
      faces_.push_back(key);
    }
  }
  std::vector<std::array<int, 3>> all_faces = faces_;
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  std::sort(faces_.begin(), faces_.end());
  faces_.erase(std::unique(faces_.begin(), faces_.end()), faces_.end());

  tet_edges_.resize(tets_.size());
  tet_faces_.resize(tets_.size());
  std::vector<int> face_count(faces_.size(), 0);
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    const auto& v = tets_[t];
    for (int e = 0; e < 6; ++e)
      tet_edges_[t][e] = lookup(edges_, std::array<int, 2>{v[kLocalEdges[e][0]], v[kLocalEdges[e][1]]});
    for (int f = 0; f < 4; ++f) {
      const auto& lf = kLocalFaces[f];
      tet_faces_[t][f] = lookup(faces_, std::array<int, 3>{v[lf[0]], v[lf[1]], v[lf[2]]});
      ++face_count[tet_faces_[t][f]];
    }
  }

  face_on_boundary_.assign(faces_.size(), false);
  edge_on_boundary_.assign(edges_.size(), false);
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (face_count[f] > 2) throw Error("non-manifold mesh: face shared by more than two tets");
    if (face_count[f] == 1) {
      face_on_boundary_[f] = true;
      boundary_faces_.push_back(static_cast<int>(f));
      const auto& fv = faces_[f];
      for (const auto& [a, b] : std::array<std::array<int, 2>, 3>{{{0, 1}, {0, 2}, {1, 2}}})
        edge_on_boundary_[lookup(edges_, std::array<int, 2>{fv[a], fv[b]})] = true;
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (edge_on_boundary_[e]) boundary_edges_.push_back(static_cast<int>(e));
}

std::array<Vec3, 4> TetMesh::tet_vertices(int t) const {
  const auto& v = tets_[t];
  return {vertices_[v[0]], vertices_[v[1]], vertices_[v[2]], vertices_[v[3]]};
}

double TetMesh::tet_volume(int t) const { return signed_volume(tet_vertices(t)); }

int TetMesh::find_edge(int a, int b) const { return lookup(edges_, std::array<int, 2>{a, b}); }

int TetMesh::find_face(int a, int b, int c) const {
  return lookup(faces_, std::array<int, 3>{a, b, c});
}

// ---------------------------------------------------------------------------
TetMesh structured_cube_mesh(int n) {
  if (n < 1) throw Error("structured_cube_mesh: n must be >= 1");
  const int np = n + 1;
  std::vector<Vec3> vertices;
  vertices.reserve(std::size_t(np) * np * np);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i)
        vertices.emplace_back(-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n, -1.0 + 2.0 * k / n);
  auto id = [np](int i, int j, int k) { return i + np * (j + np * k); };

  std::array<int, 3> perm{0, 1, 2};
  std::vector<std::array<int, 3>> paths;
  do paths.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::array<int, 4>> tets;
  tets.reserve(std::size_t(6) * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& path : paths) {
          std::array<int, 3> c{i, j, k};
          std::array<int, 4> t;
          t[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[path[s]];
            t[s + 1] = id(c[0], c[1], c[2]);
          }
          tets.push_back(t);
        }
  return TetMesh(std::move(vertices), std::move(tets));
}

AffineMap element_map(const TetMesh& mesh, int tet) {
  if (tet < 0 || tet >= static_cast<int>(mesh.num_tets()))
    throw Error("element_map: tet index out of range");
  return AffineMap::from_vertices(mesh.tet_vertices(tet));
}

MeshMetrics mesh_metrics(const TetMesh& mesh) {
  MeshMetrics m;
  m.h_min = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto v = mesh.tet_vertices(static_cast<int>(t));
    const double diam = tet_diameter(v);
    double area = 0.0;
    for (const auto& f : kLocalFaces)
      area += 0.5 * (v[f[1]] - v[f[0]]).cross(v[f[2]] - v[f[0]]).norm();
    const double inradius = 3.0 * std::abs(signed_volume(v)) / area;
    m.h = std::max(m.h, diam);
    m.h_min = std::min(m.h_min, diam);
    m.shape_regularity = std::max(m.shape_regularity, diam / (2.0 * inradius));
  }
  return m;
}

}  // namespace edgefem
