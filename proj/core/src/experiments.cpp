#include "edgefem/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "edgefem/solver.hpp"

namespace edgefem {

std::vector<int> default_meshes(int order) {
  if (order == 1) return {2, 4, 6, 8, 12, 16, 24};
  if (order == 2) return {2, 4, 6, 8, 12};
  throw Error("default_meshes: order must be 1 or 2");
}

namespace {

void check_mesh_list(const std::vector<int>& meshes) {
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    if (meshes[i] < 1) throw Error("mesh parameters must be positive");
    if (i > 0 && meshes[i] <= meshes[i - 1]) throw Error("mesh list must be strictly increasing");
  }
}

std::optional<RateFit> tail_fit(const std::vector<ErrorRecord>& records, RateAxis axis, int window) {
  const int w = std::min<int>(window, static_cast<int>(records.size()));
  if (w < 3) return std::nullopt;
  return fit_rate(records, axis, w);
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.problem != "cube_poly" && c.problem != "cube_oscillatory")
    throw Error("unknown problem '" + c.problem + "'");
  if (c.order != 1 && c.order != 2) throw Error("order must be 1 or 2");
  if (c.problem == "cube_oscillatory" && c.m < 1) throw Error("m must be positive");
  check_mesh_list(c.meshes);
  if (!(c.tol > 0.0 && c.tol < 1.0)) throw Error("tol must lie in (0, 1)");
  if (c.max_iter < 1) throw Error("max_iter must be positive");
  if (c.error_degree != 0 && c.error_degree < 2 * c.order + 4)
    throw Error("error_degree must be at least 2k + 4");
  if (c.fit_window < 3) throw Error("fit_window must be at least 3");
  for (const auto& q : {c.q1, c.q2, c.q3}) rule_by_name(q);
}

std::vector<int> mesh_list(const ExperimentConfig& config) {
  return config.meshes.empty() ? default_meshes(config.order) : config.meshes;
}

ConvergenceResult run_convergence(const ExperimentConfig& config, const ProgressFn& progress) {
  validate(config);
  const Problem problem = make_problem(config.problem, config.m);
  const SelfCheckReport check = self_check(problem);
  if (!check.passed) throw Error("problem " + problem.id + " failed its self-check");
  const QuadratureConfig rules{rule_by_name(config.q1), rule_by_name(config.q2), rule_by_name(config.q3)};
  const int error_degree = config.error_degree > 0 ? config.error_degree : 2 * config.order + 4;

  ConvergenceResult out;
  for (int n : mesh_list(config)) {
    const TetMesh mesh = structured_cube_mesh(n);
    const SparseSystem system = assemble(mesh, config.order, problem.coeffs, rules);
    SolveResult solved;
    try {
      solved = solve(system, config.tol, config.max_iter);
    } catch (const SolverBreakdown& e) {
      out.complete = false;
      out.failure = "n=" + std::to_string(n) + ": " + e.what();
      break;
    }
    if (!solved.field) {
      out.complete = false;
      out.failure = "n=" + std::to_string(n) + ": CG did not converge in " +
                    std::to_string(solved.report.iterations) + " iterations (relative residual " +
                    std::to_string(solved.report.relative_residual) + ")";
      break;
    }
    ErrorRecord r = hcurl_error(*solved.field, problem.exact, error_degree);
    r.n = n;
    r.dofs = system.n_free;
    r.iterations = solved.report.iterations;
    out.records.push_back(r);
    if (progress) progress(r);
  }
  out.fit_dofs = tail_fit(out.records, RateAxis::dofs, config.fit_window);
  out.fit_h = tail_fit(out.records, RateAxis::h, config.fit_window);
  return out;
}

ExperimentConfig preasymptotic_defaults() {
  ExperimentConfig c;
  c.problem = "cube_oscillatory";
  c.m = 10;
  c.meshes = {4, 6, 8, 12, 16, 24};
  c.q1 = "pt1_centroid";
  c.q2 = "pt1_centroid";
  c.q3 = "high";
  return c;
}

std::optional<std::size_t> plateau_exit_index(const std::vector<ErrorRecord>& records, double drop) {
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].hcurl_error <= (1.0 - drop) * records[i - 1].hcurl_error) return i;
  return std::nullopt;
}

PreasymptoticResult run_preasymptotic(const ExperimentConfig& config, const ProgressFn& progress) {
  PreasymptoticResult out;
  out.run = run_convergence(config, progress);
  out.plateau_exit = plateau_exit_index(out.run.records);
  return out;
}

// ---------------------------------------------------------------------------
void validate(const ProbeConfig& c) {
  if (c.kind != "consistency" && c.kind != "curved") throw Error("probe kind must be consistency or curved");
  if (c.order != 1 && c.order != 2) throw Error("order must be 1 or 2");
  if (c.kind == "consistency") {
    if (c.coefficients != "constant" && c.coefficients != "smooth")
      throw Error("coefficients must be constant or smooth");
    check_mesh_list(c.meshes);
    if (c.meshes.size() < 3) throw Error("consistency probe needs at least 3 meshes");
    for (const auto& q : {c.q1, c.q2, c.q3}) rule_by_name(q);
  } else {
    if (c.mode != "mass" && c.mode != "curlcurl" && c.mode != "load")
      throw Error("curved mode must be mass, curlcurl or load");
    if (c.shrink.size() < 3) throw Error("curved probe needs at least 3 shrink factors");
    for (double s : c.shrink)
      if (!(s > 0.0)) throw Error("shrink factors must be positive");
    rule_by_name(c.rule);
  }
}

namespace {

constexpr double kExactLevel = 1e-10;

ProbeResult consistency_probe(const ProbeConfig& c) {
  const Problem problem = c.coefficients == "constant" ? cube_poly() : cube_oscillatory(1);
  const QuadratureConfig rules{rule_by_name(c.q1), rule_by_name(c.q2), rule_by_name(c.q3)};
  const VectorField u_field = random_smooth_field(c.seed);
  const VectorField v_field = random_smooth_field(c.seed + 1);
  ProbeResult out;
  for (int n : c.meshes) {
    const TetMesh mesh = structured_cube_mesh(n);
    Eigen::VectorXcd u = interpolate(mesh, c.order, u_field);
    Eigen::VectorXcd v = interpolate(mesh, c.order, v_field);
    u /= discrete_hcurl_norm(mesh, c.order, u);
    v /= discrete_hcurl_norm(mesh, c.order, v);
    const ConsistencyError e = consistency_error(mesh, c.order, problem.coeffs, rules, u, v);
    out.rows.push_back({mesh.h(), e.sesquilinear, e.antilinear});
  }
  return out;
}

MatrixField probe_coefficient() {
  return [](const Vec3& x) -> CMat3 {
    CMat3 m = (2.0 + std::sin(x.x() + 2.0 * x.y()) * std::cos(x.z())) * CMat3::Identity();
    m(0, 1) = m(1, 0) = 0.3 * std::cos(x.x() - x.z());
    m(0, 2) = m(2, 0) = 0.2 * std::sin(x.y());
    m(1, 2) = m(2, 1) = 0.1 * std::cos(x.x() + x.y() + x.z());
    return m;
  };
}

VectorField probe_source() {
  return [](const Vec3& x) -> CVec3 {
    return CVec3(std::cos(x.x() + x.y()), std::sin(x.y() - x.z()), std::cos(2.0 * x.z() + x.x()));
  };
}

ProbeResult curved_probe(const ProbeConfig& c) {
  const RefQuadratureRule rule = rule_by_name(c.rule);
  const CurvedMode mode = c.mode == "mass"       ? CurvedMode::mass
                          : c.mode == "curlcurl" ? CurvedMode::curlcurl
                                                 : CurvedMode::load;
  const int n = CurlBasis(c.order).n_dofs();
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  CurvedProbeInput input{probe_coefficient(), probe_source(), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) input.trial(i) = unit(rng);
  for (int i = 0; i < n; ++i) input.test(i) = unit(rng);
  ProbeResult out;
  for (double s : c.shrink)
    out.rows.push_back({s, curved_local_error(shrinking_curved_element(s), input, rule, c.order, mode), 0.0});
  return out;
}

std::optional<RateFit> fit_column(const std::vector<ProbeRow>& rows, bool load) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : rows) {
    const double e = load ? r.load_error : r.error;
    if (e <= kExactLevel) return std::nullopt;
    x.push_back(r.x);
    y.push_back(e);
  }
  return fit_loglog(x, y);
}

}  // namespace

ProbeResult run_probe(const ProbeConfig& config) {
  validate(config);
  ProbeResult out = config.kind == "consistency" ? consistency_probe(config) : curved_probe(config);
  out.exact = std::all_of(out.rows.begin(), out.rows.end(), [](const ProbeRow& r) {
    return r.error <= kExactLevel && r.load_error <= kExactLevel;
  });
  out.fit = fit_column(out.rows, false);
  if (config.kind == "consistency") out.load_fit = fit_column(out.rows, true);
  return out;
}

// ---------------------------------------------------------------------------
QuadCheckReport run_quadcheck(const std::vector<RefQuadratureRule>& extra) {
  QuadCheckReport report;
  report.builtin_only = extra.empty();
  std::vector<const RefQuadratureRule*> rules;
  for (const auto& label : builtin_labels()) rules.push_back(&builtin_rule(label));
  for (const auto& r : extra) rules.push_back(&r);
  report.passed = true;
  for (const RefQuadratureRule* r : rules) {
    QuadCheckEntry e;
    e.label = r->label();
    e.degree = r->exactness_degree();
    e.points = r->size();
    e.exact_at_degree = verify_exactness(*r, e.degree).exact;
    const ExactnessReport above = verify_exactness(*r, e.degree + 1);
    e.worst_above = above.worst_error;
    e.tight = above.worst_error > 1e-6;
    report.passed = report.passed && e.exact_at_degree && e.tight;
    report.entries.push_back(e);
  }
  return report;
}

void write_csv(std::ostream& out, const std::vector<ErrorRecord>& records) {
  const auto old_precision = out.precision(17);
  out << "n,h,dofs,l2_error,curl_error,hcurl_error,iters\n";
  for (const auto& r : records)
    out << r.n << ',' << r.h << ',' << r.dofs << ',' << r.l2_error << ',' << r.curl_error << ','
        << r.hcurl_error << ',' << r.iterations << '\n';
  out.precision(old_precision);
}

void write_dat(std::ostream& out, const std::vector<ErrorRecord>& records) {
  const auto old_precision = out.precision(17);
  out << "# n h dofs l2_error curl_error hcurl_error iters\n";
  for (const auto& r : records)
    out << r.n << ' ' << r.h << ' ' << r.dofs << ' ' << r.l2_error << ' ' << r.curl_error << ' '
        << r.hcurl_error << ' ' << r.iterations << '\n';
  out.precision(old_precision);
}

void write_probe_csv(std::ostream& out, const ProbeConfig& config, const ProbeResult& result) {
  const auto old_precision = out.precision(17);
  if (config.kind == "consistency") {
    out << "h,sesquilinear_error,antilinear_error\n";
    for (const auto& r : result.rows) out << r.x << ',' << r.error << ',' << r.load_error << '\n';
  } else {
    out << "s,error\n";
    for (const auto& r : result.rows) out << r.x << ',' << r.error << '\n';
  }
  out.precision(old_precision);
}

void write_quadcheck(std::ostream& out, const QuadCheckReport& report) {
  out << (report.builtin_only ? "builtin only" : "builtin + custom") << '\n';
  for (const auto& e : report.entries) {
    out << e.label << " points=" << e.points << " degree=" << e.degree
        << " exact=" << (e.exact_at_degree ? "yes" : "NO") << " tight=" << (e.tight ? "yes" : "NO")
        << " worst(degree+1)=" << e.worst_above << '\n';
  }
  out << (report.passed ? "PASS" : "FAIL") << '\n';
}

}  // namespace edgefem
