#pragma once

#include <array>
#include <type_traits>
#include <vector>

#include "edgefem/mesh.hpp"
#include "edgefem/types.hpp"

namespace edgefem {

/// Entity a degree of freedom is attached to.
struct DofEntity {
  enum class Kind { edge, face };
  Kind kind = Kind::edge;
  /// Local edge (0-5) or local face (0-3) index.
  int entity = 0;
  /// Moment index within the entity.
  int moment = 0;
};

/// First-kind Nedelec basis of order 1 (Whitney, 6 DOFs) or 2 (20 DOFs) on
/// the reference tetrahedron.
///
/// Degrees of freedom, all taken in the local ascending-vertex frame:
///   edge (a, b):   int_0^1 u(p(s)) . (v_b - v_a) q_j(s) ds, with q = 1 for
///                  order 1 and q_0 = 1 - s, q_1 = s for order 2;
///   face (a, b, c) (order 2): int over the parameter triangle of
///                  u(p(s, t)) . (v_b - v_a) and u(p(s, t)) . (v_c - v_a).
/// The shape functions are dual to these functionals.
class CurlBasis {
 public:
  explicit CurlBasis(int order);

  int order() const { return order_; }
  int n_dofs() const { return n_dofs_; }
  const std::vector<DofEntity>& dof_entities() const { return entities_; }

  /// n_dofs x 3 table of shape-function values at a reference point.
  BasisTable values(const Vec3& p) const;
  /// n_dofs x 3 table of shape-function curls.
  BasisTable curls(const Vec3& p) const;

  /// Points at which DOF functionals sample a field, and the n_dofs x
  /// (3 * npoints) matrix G such that dofs = G * [u(p_0); u(p_1); ...].
  const std::vector<Vec3>& dof_points() const { return dof_points_; }
  const Eigen::MatrixXd& dof_weights() const { return dof_weights_; }

  /// Applies every DOF functional to a reference field.
  template <class F>
  auto apply_dofs(F&& u) const {
    using V = std::decay_t<decltype(u(dof_points_.front()))>;
    using S = typename V::Scalar;
    Eigen::Matrix<S, Eigen::Dynamic, 1> samples(3 * dof_points_.size());
    for (std::size_t i = 0; i < dof_points_.size(); ++i) samples.template segment<3>(3 * i) = u(dof_points_[i]);
    return Eigen::Matrix<S, Eigen::Dynamic, 1>(dof_weights_.template cast<S>() * samples);
  }

  /// DOF functionals applied to the shape functions; the identity up to
  /// rounding.
  Eigen::MatrixXd dof_matrix() const;

  /// 2-norm condition number of the functional-on-spanning-set matrix that
  /// was inverted to build the dual basis (1 for order 1).
  double spanning_condition() const { return spanning_condition_; }

 private:
  BasisTable spanning_values(const Vec3& p) const;
  BasisTable spanning_curls(const Vec3& p) const;

  int order_;
  int n_dofs_;
  std::vector<DofEntity> entities_;
  std::vector<Vec3> dof_points_;
  Eigen::MatrixXd dof_weights_;
  /// Shape function i = sum_j coeff_(i, j) * spanning function j.
  Eigen::MatrixXd coeff_;
  double spanning_condition_ = 1.0;
};

BasisTable eval_basis(const CurlBasis& basis, const Vec3& p);
BasisTable eval_curl_basis(const CurlBasis& basis, const Vec3& p);

struct PhysicalBasis {
  BasisTable values;
  BasisTable curls;
};

/// Covariant Piola transform: values J^{-T} v, curls J c / det J.
/// Throws SingularMapError for a singular Jacobian.
PhysicalBasis piola_push(const BasisTable& values, const BasisTable& curls, const Mat3& jacobian);
PhysicalBasis piola_push(const BasisTable& values, const BasisTable& curls, const AffineMap& map);

/// Orientation of an element's edges and faces relative to the global
/// ascending-id frame.
struct OrientationKey {
  /// +1 if the local edge runs from the smaller to the larger global id.
  std::array<int, 6> edge_sign{};
  /// face_transform[f](i, k): local face tangent i expressed in the global
  /// frame (B - A, C - A) of the face's ascending global ids A < B < C.
  std::array<Eigen::Matrix2i, 4> face_transform{};
};

OrientationKey orientation_key(const std::array<int, 4>& global_ids);

/// Block matrix P with local functionals = P * global functionals. The
/// global basis restricted to the element is P^T times the local basis.
Eigen::MatrixXd orientation_matrix(const CurlBasis& basis, const OrientationKey& key);

/// In-place table <- P^T table (rows are shape functions).
void apply_orientation(const CurlBasis& basis, const OrientationKey& key, BasisTable& table);

/// Global DOF index of local DOF i of tet t. Order 1: one DOF per edge.
/// Order 2: two per edge, followed by two per face.
int global_dof(const TetMesh& mesh, const CurlBasis& basis, int tet, int local);

/// Number of global DOFs of the order-k space on the mesh.
std::size_t global_dof_count(const TetMesh& mesh, int order);

}  // namespace edgefem
