#include "edgefem/assembly.hpp"

#include <ostream>

namespace edgefem {

Coefficients Coefficients::isotropic(ScalarField mu_inv, ScalarField eps, double omega,
                                     VectorField current) {
  Coefficients c;
  c.mu_inv = [m = std::move(mu_inv)](const Vec3& x) -> CMat3 { return m(x) * CMat3::Identity(); };
  c.eps = [e = std::move(eps)](const Vec3& x) -> CMat3 { return e(x) * CMat3::Identity(); };
  c.omega = omega;
  c.current = std::move(current);
  return c;
}

Coefficients Coefficients::constant(Complex mu_inv, Complex eps, double omega,
                                    VectorField current) {
  Coefficients c;
  c.mu_inv = [mu_inv](const Vec3&) -> CMat3 { return mu_inv * CMat3::Identity(); };
  c.eps = [eps](const Vec3&) -> CMat3 { return eps * CMat3::Identity(); };
  c.omega = omega;
  c.current = std::move(current);
  return c;
}

const QuadratureConfig& reference_config() {
  static const QuadratureConfig config = QuadratureConfig::uniform(tensorized_gl(6));
  return config;
}

const OrientationKey& identity_orientation() {
  static const OrientationKey key = orientation_key({0, 1, 2, 3});
  return key;
}

// ---------------------------------------------------------------------------
ElementIntegrator::Tables ElementIntegrator::tabulate(const CurlBasis& basis,
                                                      const RefQuadratureRule& rule) {
  Tables t;
  for (const Vec3& p : rule.points()) {
    t.values.push_back(basis.values(p));
    t.curls.push_back(basis.curls(p));
  }
  return t;
}

ElementIntegrator::ElementIntegrator(const CurlBasis& basis, QuadratureConfig config)
    : basis_(basis),
      config_(std::move(config)),
      t1_(tabulate(basis, config_.q1)),
      t2_(tabulate(basis, config_.q2)),
      t3_(tabulate(basis, config_.q3)) {}

ElementMatrices ElementIntegrator::compute(const AffineMap& map, const Coefficients& coeffs,
                                           const OrientationKey& key) const {
  const int n = basis_.n_dofs();
  const double det = map.det();
  const double jac = std::abs(det);
  const Mat3 curl_map = map.jacobian().transpose() / det;
  ElementMatrices out{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n),
                      Eigen::VectorXcd::Zero(n)};

  BasisTable table;
  for (std::size_t l = 0; l < config_.q1.size(); ++l) {
    table = t1_.curls[l];
    apply_orientation(basis_, key, table);
    const BasisTable c = table * curl_map;
    const Vec3 x = map.apply(config_.q1.points()[l]);
    const double w = jac * config_.q1.weights()[l];
    out.curl_curl.noalias() += w * (c.cast<Complex>() * coeffs.mu_inv(x) * c.transpose().cast<Complex>());
  }

  const double omega2 = coeffs.omega * coeffs.omega;
  for (std::size_t l = 0; l < config_.q2.size(); ++l) {
    table = t2_.values[l];
    apply_orientation(basis_, key, table);
    const BasisTable v = table * map.inverse();
    const Vec3 x = map.apply(config_.q2.points()[l]);
    const double w = jac * config_.q2.weights()[l];
    out.mass.noalias() += (-omega2 * w) * (v.cast<Complex>() * coeffs.eps(x) * v.transpose().cast<Complex>());
  }

  if (coeffs.current) {
    const Complex factor(0.0, -coeffs.omega);
    for (std::size_t l = 0; l < config_.q3.size(); ++l) {
      table = t3_.values[l];
      apply_orientation(basis_, key, table);
      const BasisTable v = table * map.inverse();
      const Vec3 x = map.apply(config_.q3.points()[l]);
      const double w = jac * config_.q3.weights()[l];
      out.load.noalias() += (factor * w) * (v.cast<Complex>() * coeffs.current(x));
    }
  }
  return out;
}

ElementMatrices element_matrices(const AffineMap& map, const CurlBasis& basis,
                                 const Coefficients& coeffs, const QuadratureConfig& config,
                                 const OrientationKey& key) {
  return ElementIntegrator(basis, config).compute(map, coeffs, key);
}

// ---------------------------------------------------------------------------
DofInfo dof_info(const TetMesh& mesh, int order, int g) {
  if (g < 0 || static_cast<std::size_t>(g) >= global_dof_count(mesh, order))
    throw Error("dof_info: DOF index out of range");
  if (order == 1) return {DofEntity::Kind::edge, g, 0};
  const int ne = static_cast<int>(mesh.num_edges());
  if (g < 2 * ne) return {DofEntity::Kind::edge, g / 2, g % 2};
  return {DofEntity::Kind::face, (g - 2 * ne) / 2, (g - 2 * ne) % 2};
}

namespace {

std::array<int, 20> element_dofs(const TetMesh& mesh, const CurlBasis& basis, int t) {
  std::array<int, 20> dofs{};
  for (int i = 0; i < basis.n_dofs(); ++i) dofs[i] = global_dof(mesh, basis, t, i);
  return dofs;
}

}  // namespace

ScatteredSystem assemble_scattered(const TetMesh& mesh, int order, const Coefficients& coeffs,
                                   const QuadratureConfig& config) {
  const CurlBasis basis(order);
  const ElementIntegrator integrator(basis, config);
  const int n = basis.n_dofs();
  const auto total = static_cast<Eigen::Index>(global_dof_count(mesh, order));

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(mesh.num_tets() * n * n);
  ScatteredSystem out;
  out.rhs = Eigen::VectorXcd::Zero(total);
  for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
    const auto key = orientation_key(mesh.tets()[t]);
    const auto em = integrator.compute(element_map(mesh, t), coeffs, key);
    const auto dofs = element_dofs(mesh, basis, t);
    for (int i = 0; i < n; ++i) {
      out.rhs(dofs[i]) += em.load(i);
      for (int j = 0; j < n; ++j) triplets.emplace_back(dofs[i], dofs[j], em.curl_curl(i, j) + em.mass(i, j));
    }
  }
  out.matrix.resize(total, total);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  return out;
}

SparseSystem eliminate_pec(const ScatteredSystem& scattered, const TetMesh& mesh, int order) {
  SparseSystem sys;
  sys.mesh = &mesh;
  sys.order = order;
  sys.n_total = global_dof_count(mesh, order);
  if (static_cast<std::size_t>(scattered.matrix.rows()) != sys.n_total)
    throw Error("eliminate_pec: system size does not match the mesh");
  sys.constrained.assign(sys.n_total, false);
  for (std::size_t g = 0; g < sys.n_total; ++g) {
    const DofInfo d = dof_info(mesh, order, static_cast<int>(g));
    sys.constrained[g] = d.kind == DofEntity::Kind::edge ? mesh.is_boundary_edge(d.entity)
                                                         : mesh.is_boundary_face(d.entity);
  }
  sys.global_to_free.assign(sys.n_total, -1);
  for (std::size_t g = 0; g < sys.n_total; ++g)
    if (!sys.constrained[g]) {
      sys.global_to_free[g] = static_cast<int>(sys.free_to_global.size());
      sys.free_to_global.push_back(static_cast<int>(g));
    }
  sys.n_free = sys.free_to_global.size();

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(scattered.matrix.nonZeros());
  for (int r = 0; r < scattered.matrix.outerSize(); ++r) {
    const int fr = sys.global_to_free[r];
    if (fr < 0) continue;
    for (SparseMatrix::InnerIterator it(scattered.matrix, r); it; ++it) {
      const int fc = sys.global_to_free[it.col()];
      if (fc >= 0) triplets.emplace_back(fr, fc, it.value());
    }
  }
  const auto nf = static_cast<Eigen::Index>(sys.n_free);
  sys.matrix.resize(nf, nf);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  sys.rhs.resize(nf);
  for (Eigen::Index i = 0; i < nf; ++i) sys.rhs(i) = scattered.rhs(sys.free_to_global[i]);
  return sys;
}

SparseSystem assemble(const TetMesh& mesh, int order, const Coefficients& coeffs,
                      const QuadratureConfig& config) {
  return eliminate_pec(assemble_scattered(mesh, order, coeffs, config), mesh, order);
}

FormValues evaluate_forms(const TetMesh& mesh, int order, const Coefficients& coeffs,
                          const QuadratureConfig& config, const Eigen::VectorXcd& u,
                          const Eigen::VectorXcd& v) {
  const auto total = static_cast<Eigen::Index>(global_dof_count(mesh, order));
  if (u.size() != total || v.size() != total) throw Error("evaluate_forms: DOF vector size mismatch");
  const CurlBasis basis(order);
  const ElementIntegrator integrator(basis, config);
  const int n = basis.n_dofs();
  FormValues out{0.0, 0.0};
  Eigen::VectorXcd ul(n);
  Eigen::VectorXcd vl(n);
  for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
    const auto dofs = element_dofs(mesh, basis, t);
    for (int i = 0; i < n; ++i) {
      ul(i) = u(dofs[i]);
      vl(i) = v(dofs[i]);
    }
    if (ul.isZero(0.0) && vl.isZero(0.0)) continue;
    const auto em = integrator.compute(element_map(mesh, t), coeffs, orientation_key(mesh.tets()[t]));
    out.sesquilinear += vl.dot((em.curl_curl + em.mass) * ul);
    out.antilinear += vl.dot(em.load);
  }
  return out;
}

Eigen::VectorXcd interpolate(const TetMesh& mesh, int order, const VectorField& field) {
  const CurlBasis basis(order);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(global_dof_count(mesh, order)));
  for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
    const AffineMap map = element_map(mesh, t);
    const Mat3 jt = map.jacobian().transpose();
    // Covariant pullback J^T E(T(x)); the DOFs are invariant under it.
    const Eigen::VectorXcd local = basis.apply_dofs(
        [&](const Vec3& p) -> CVec3 { return jt.cast<Complex>() * field(map.apply(p)); });
    const Eigen::MatrixXd p = orientation_matrix(basis, orientation_key(mesh.tets()[t]));
    const Eigen::VectorXcd global = p.cast<Complex>().partialPivLu().solve(local);
    const auto dofs = element_dofs(mesh, basis, t);
    for (int i = 0; i < basis.n_dofs(); ++i) out(dofs[i]) = global(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
SolutionField::SolutionField(const TetMesh& mesh, int order, Eigen::VectorXcd dofs)
    : mesh_(&mesh), basis_(order), dofs_(std::move(dofs)) {
  if (static_cast<std::size_t>(dofs_.size()) != global_dof_count(mesh, order))
    throw Error("SolutionField: DOF vector size mismatch");
}

Eigen::VectorXcd SolutionField::local_dofs(int tet) const {
  Eigen::VectorXcd out(basis_.n_dofs());
  for (int i = 0; i < basis_.n_dofs(); ++i) out(i) = dofs_(global_dof(*mesh_, basis_, tet, i));
  return out;
}

CVec3 SolutionField::value(int tet, const Vec3& ref) const {
  BasisTable table = basis_.values(ref);
  apply_orientation(basis_, orientation_key(mesh_->tets()[tet]), table);
  const BasisTable v = table * element_map(*mesh_, tet).inverse();
  return v.cast<Complex>().transpose() * local_dofs(tet);
}

CVec3 SolutionField::curl(int tet, const Vec3& ref) const {
  BasisTable table = basis_.curls(ref);
  apply_orientation(basis_, orientation_key(mesh_->tets()[tet]), table);
  const AffineMap map = element_map(*mesh_, tet);
  const BasisTable c = table * map.jacobian().transpose() / map.det();
  return c.cast<Complex>().transpose() * local_dofs(tet);
}

Eigen::VectorXcd expand_free(const SparseSystem& system, const Eigen::VectorXcd& free) {
  if (static_cast<std::size_t>(free.size()) != system.n_free) throw Error("expand_free: size mismatch");
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(system.n_total));
  for (std::size_t i = 0; i < system.n_free; ++i) full(system.free_to_global[i]) = free(i);
  return full;
}

void write_matrix(std::ostream& out, const SparseMatrix& matrix) {
  const auto old_precision = out.precision(17);
  for (int r = 0; r < matrix.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(matrix, r); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
  out.precision(old_precision);
}

}  // namespace edgefem
