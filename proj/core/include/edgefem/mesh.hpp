#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "edgefem/types.hpp"

namespace edgefem {

/// Local edge (a, b) of the reference tetrahedron, a < b.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Local face i is opposite vertex i, vertices in ascending local order.
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces{
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

/// Vertices of the reference tetrahedron conv{0, e1, e2, e3}.
const std::array<Vec3, 4>& reference_vertices();

/// T(x) = origin + J x.
class AffineMap {
 public:
  /// Throws SingularMapError if the Jacobian is singular.
  AffineMap(const Vec3& origin, const Mat3& jacobian);

  /// Map sending the reference vertices to v[0..3].
  static AffineMap from_vertices(const std::array<Vec3, 4>& v);

  Vec3 apply(const Vec3& ref) const { return origin_ + jac_ * ref; }
  const Vec3& origin() const { return origin_; }
  const Mat3& jacobian() const { return jac_; }
  const Mat3& inverse() const { return inv_; }
  /// J^{-T}, cached.
  const Mat3& inverse_transpose() const { return inv_t_; }
  double det() const { return det_; }

 private:
  Vec3 origin_;
  Mat3 jac_;
  Mat3 inv_;
  Mat3 inv_t_;
  double det_;
};

/// Quadratic (10-node Lagrange) tetrahedral map.
///
/// Control points are ordered as the 4 vertices followed by one node per
/// local edge in kLocalEdges order.
class CurvedMap {
 public:
  static constexpr int kDegree = 2;

  /// Throws SingularMapError when det J <= 0 at any point of the sampling
  /// lattice of degree 2 * kDegree.
  explicit CurvedMap(const std::array<Vec3, 10>& control_points);

  /// Control points placed at the affine images of the reference nodes.
  static CurvedMap from_affine(const AffineMap& map);

  Vec3 apply(const Vec3& ref) const;
  Mat3 jacobian(const Vec3& ref) const;
  double det(const Vec3& ref) const { return jacobian(ref).determinant(); }
  const std::array<Vec3, 10>& control_points() const { return nodes_; }

 private:
  std::array<Vec3, 10> nodes_;
};

/// Reference-coordinate positions of the 10 quadratic nodes.
const std::array<Vec3, 10>& quadratic_reference_nodes();

/// Conforming tetrahedral mesh with derived edge/face topology.
///
/// Invariants: every tet has positive signed volume; edges and faces are
/// stored as ascending vertex tuples, sorted and duplicate-free; boundary
/// detection is by face multiplicity.
class TetMesh {
 public:
  /// Builds the derived topology. Tets with negative volume are reordered;
  /// degenerate tets throw edgefem::Error.
  TetMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 4>>& tets() const { return tets_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }

  /// Global edge index of local edge e of tet t.
  int tet_edge(int t, int e) const { return tet_edges_[t][e]; }
  /// Global face index of local face f of tet t.
  int tet_face(int t, int f) const { return tet_faces_[t][f]; }

  const std::vector<int>& boundary_faces() const { return boundary_faces_; }
  const std::vector<int>& boundary_edges() const { return boundary_edges_; }
  bool is_boundary_face(int f) const { return face_on_boundary_[f]; }
  bool is_boundary_edge(int e) const { return edge_on_boundary_[e]; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_tets() const { return tets_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_faces() const { return faces_.size(); }

  /// Largest element diameter.
  double h() const { return h_; }

  std::array<Vec3, 4> tet_vertices(int t) const;
  double tet_volume(int t) const;

  /// Index of the edge {a, b}, or -1.
  int find_edge(int a, int b) const;
  /// Index of the face {a, b, c}, or -1.
  int find_face(int a, int b, int c) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 4>> tets_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<std::array<int, 6>> tet_edges_;
  std::vector<std::array<int, 4>> tet_faces_;
  std::vector<int> boundary_faces_;
  std::vector<int> boundary_edges_;
  std::vector<bool> face_on_boundary_;
  std::vector<bool> edge_on_boundary_;
  double h_ = 0.0;
};

/// [-1, 1]^3 split into n^3 cubes, each cut into 6 tets sharing the main
/// diagonal (Kuhn split, same diagonal direction everywhere).
TetMesh structured_cube_mesh(int n);

/// Gmsh MSH ASCII 2.2 reader. Only 4-node tetrahedra (type 4) are kept.
TetMesh read_gmsh(const std::filesystem::path& path);
TetMesh read_gmsh(std::istream& in);

/// Writes MSH ASCII 2.2 with 1-based node and element ids.
void write_gmsh(std::ostream& out, const TetMesh& mesh);

AffineMap element_map(const TetMesh& mesh, int tet);

/// Builds a quadratic map; thin wrapper over the CurvedMap constructor.
CurvedMap curved_map(const std::array<Vec3, 10>& control_points);

struct MeshMetrics {
  double h = 0.0;
  double h_min = 0.0;
  /// max over tets of diameter / insphere diameter.
  double shape_regularity = 0.0;
};

MeshMetrics mesh_metrics(const TetMesh& mesh);

}  // namespace edgefem
