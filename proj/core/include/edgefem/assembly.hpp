#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Sparse>

#include "edgefem/mesh.hpp"
#include "edgefem/quadrature.hpp"
#include "edgefem/reference_element.hpp"
#include "edgefem/types.hpp"

namespace edgefem {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor, int>;

/// Material data and source of the time-harmonic problem
///   curl(mu_inv curl E) - omega^2 eps E = -i omega J.
struct Coefficients {
  MatrixField mu_inv;
  MatrixField eps;
  double omega = 1.0;
  VectorField current;

  /// mu_inv(x) = m(x) I, eps(x) = e(x) I.
  static Coefficients isotropic(ScalarField mu_inv, ScalarField eps, double omega,
                                VectorField current);
  static Coefficients constant(Complex mu_inv, Complex eps, double omega,
                               VectorField current = nullptr);
};

/// Independent rules for the curl-curl (q1), mass (q2) and load (q3) terms.
struct QuadratureConfig {
  RefQuadratureRule q1;
  RefQuadratureRule q2;
  RefQuadratureRule q3;

  static QuadratureConfig uniform(const RefQuadratureRule& rule) { return {rule, rule, rule}; }
};

/// Rules of certified degree 10 used wherever exact integration is meant.
const QuadratureConfig& reference_config();

struct ElementMatrices {
  /// A(i, j) = Q1(mu_inv curl phi_j . conj curl phi_i)
  Eigen::MatrixXcd curl_curl;
  /// M(i, j) = Q2(-omega^2 eps phi_j . conj phi_i)
  Eigen::MatrixXcd mass;
  /// f(i) = Q3(-i omega J . conj phi_i)
  Eigen::VectorXcd load;
};

/// Element integrator with reference basis tables cached per rule.
class ElementIntegrator {
 public:
  ElementIntegrator(const CurlBasis& basis, QuadratureConfig config);

  const CurlBasis& basis() const { return basis_; }
  const QuadratureConfig& config() const { return config_; }

  ElementMatrices compute(const AffineMap& map, const Coefficients& coeffs,
                          const OrientationKey& key) const;

 private:
  struct Tables {
    std::vector<BasisTable> values;
    std::vector<BasisTable> curls;
  };
  static Tables tabulate(const CurlBasis& basis, const RefQuadratureRule& rule);

  const CurlBasis& basis_;
  QuadratureConfig config_;
  Tables t1_, t2_, t3_;
};

/// Key of an element whose local and global frames coincide.
const OrientationKey& identity_orientation();

ElementMatrices element_matrices(const AffineMap& map, const CurlBasis& basis,
                                 const Coefficients& coeffs, const QuadratureConfig& config,
                                 const OrientationKey& key = identity_orientation());

/// Global DOF metadata.
struct DofInfo {
  DofEntity::Kind kind;
  /// Global edge or face index.
  int entity;
  int moment;
};

DofInfo dof_info(const TetMesh& mesh, int order, int global);

/// Global system before boundary elimination, all DOFs present.
struct ScatteredSystem {
  SparseMatrix matrix;
  Eigen::VectorXcd rhs;
};

/// System restricted to the DOFs not fixed by the PEC condition.
struct SparseSystem {
  const TetMesh* mesh = nullptr;
  int order = 1;
  SparseMatrix matrix;
  Eigen::VectorXcd rhs;
  /// One entry per global DOF.
  std::vector<bool> constrained;
  /// Free index -> global DOF.
  std::vector<int> free_to_global;
  /// Global DOF -> free index, -1 when constrained.
  std::vector<int> global_to_free;
  std::size_t n_free = 0;
  std::size_t n_total = 0;
};

/// Element blocks scattered in element order with orientation applied.
ScatteredSystem assemble_scattered(const TetMesh& mesh, int order, const Coefficients& coeffs,
                                   const QuadratureConfig& config);

/// Drops every DOF on a boundary edge or face (rows and columns).
SparseSystem eliminate_pec(const ScatteredSystem& scattered, const TetMesh& mesh, int order);

/// assemble_scattered followed by eliminate_pec. The returned system keeps a
/// pointer to `mesh`, which must outlive it.
SparseSystem assemble(const TetMesh& mesh, int order, const Coefficients& coeffs,
                      const QuadratureConfig& config);

struct FormValues {
  /// Phi(U, V)
  Complex sesquilinear;
  /// F(V)
  Complex antilinear;
};

/// Element-by-element evaluation of the numeric forms for full-layout DOF
/// vectors U (trial) and V (test).
FormValues evaluate_forms(const TetMesh& mesh, int order, const Coefficients& coeffs,
                          const QuadratureConfig& config, const Eigen::VectorXcd& u,
                          const Eigen::VectorXcd& v);

/// Canonical interpolant of a physical field into the order-k space; full
/// layout.
Eigen::VectorXcd interpolate(const TetMesh& mesh, int order, const VectorField& field);

/// Discrete field over a mesh.
class SolutionField {
 public:
  SolutionField(const TetMesh& mesh, int order, Eigen::VectorXcd dofs);

  const TetMesh& mesh() const { return *mesh_; }
  int order() const { return basis_.order(); }
  const Eigen::VectorXcd& dofs() const { return dofs_; }
  const CurlBasis& basis() const { return basis_; }

  /// E_h at reference point `ref` of tet `tet`.
  CVec3 value(int tet, const Vec3& ref) const;
  CVec3 curl(int tet, const Vec3& ref) const;

  /// Element-local DOFs in the global frame of tet `tet`.
  Eigen::VectorXcd local_dofs(int tet) const;

 private:
  const TetMesh* mesh_;
  CurlBasis basis_;
  Eigen::VectorXcd dofs_;
};

/// Expands a free-DOF vector to the full layout with zeros on constrained
/// DOFs.
Eigen::VectorXcd expand_free(const SparseSystem& system, const Eigen::VectorXcd& free);

/// Coordinate dump "i j re im", 0-based, one nonzero per line.
void write_matrix(std::ostream& out, const SparseMatrix& matrix);

}  // namespace edgefem
