#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "edgefem/analysis.hpp"

namespace edgefem {

/// Seed of every random probe field unless a config overrides it.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct ExperimentConfig {
  /// "cube_poly" or "cube_oscillatory".
  std::string problem = "cube_poly";
  /// Oscillation parameter of cube_oscillatory.
  int m = 10;
  int order = 1;
  /// Mesh parameters n of structured_cube_mesh; empty selects the default
  /// list for the order.
  std::vector<int> meshes;
  /// Rule names accepted by rule_by_name.
  std::string q1 = "pt1_offcenter";
  std::string q2 = "pt1_centroid";
  std::string q3 = "pt1_offcenter";
  double tol = 1e-10;
  int max_iter = 20000;
  /// Degree of the error-integration rule; 0 selects 2k + 4.
  int error_degree = 0;
  /// Number of trailing meshes used for the rate fit.
  int fit_window = 4;
};

/// {2, 4, 6, 8, 12, 16, 24} for k = 1, {2, 4, 6, 8, 12} for k = 2.
std::vector<int> default_meshes(int order);

/// Throws edgefem::Error on an invalid configuration.
void validate(const ExperimentConfig& config);

/// Meshes of the configuration with the default filled in.
std::vector<int> mesh_list(const ExperimentConfig& config);

using ProgressFn = std::function<void(const ErrorRecord&)>;

struct ConvergenceResult {
  std::vector<ErrorRecord> records;
  /// Present when enough meshes completed.
  std::optional<RateFit> fit_dofs;
  std::optional<RateFit> fit_h;
  /// False when the solver failed on some mesh; records then hold the
  /// completed prefix.
  bool complete = true;
  std::string failure;
};

/// Mesh, assemble, solve and measure for every n; then fit the H(curl)
/// error against free DOFs and h over the last fit_window meshes.
ConvergenceResult run_convergence(const ExperimentConfig& config, const ProgressFn& progress = {});

/// Defaults of the preasymptotic study: cube_oscillatory with m = 10,
/// n in {4, 6, 8, 12, 16, 24}, q1 = centroid, q3 = the degree-7 rule. The
/// coarsest n = 2 mesh is left out: its error is dominated by the
/// unresolved oscillation and every rule "drops" from it.
ExperimentConfig preasymptotic_defaults();

/// First index i >= 1 whose error is at most (1 - drop) times the error at
/// i - 1.
std::optional<std::size_t> plateau_exit_index(const std::vector<ErrorRecord>& records,
                                              double drop = 0.2);

struct PreasymptoticResult {
  ConvergenceResult run;
  std::optional<std::size_t> plateau_exit;
};

PreasymptoticResult run_preasymptotic(const ExperimentConfig& config,
                                      const ProgressFn& progress = {});

struct ProbeConfig {
  /// "consistency" or "curved".
  std::string kind = "consistency";
  int order = 1;
  /// Consistency probe: "constant" (cube_poly data) or "smooth"
  /// (eps0 = -10 - 9 sin(pi z)).
  std::string coefficients = "smooth";
  std::string q1 = "pt1_offcenter";
  std::string q2 = "pt1_centroid";
  std::string q3 = "pt1_centroid";
  std::vector<int> meshes{2, 4, 8, 16};
  /// Curved probe: "mass", "curlcurl" or "load", the rule, and the shrink
  /// factors.
  std::string mode = "mass";
  std::string rule = "pt5";
  std::vector<double> shrink{1.0, 0.5, 0.25, 0.125};
  std::uint64_t seed = kDefaultSeed;
};

void validate(const ProbeConfig& config);

struct ProbeRow {
  /// h for the consistency probe, s for the curved probe.
  double x = 0.0;
  /// |Phi - Phi_h| or the curved-element error.
  double error = 0.0;
  /// |F - F_h| (consistency probe only).
  double load_error = 0.0;
};

struct ProbeResult {
  std::vector<ProbeRow> rows;
  /// Absent when every error is at rounding level.
  std::optional<RateFit> fit;
  std::optional<RateFit> load_fit;
  /// Every error below 1e-10.
  bool exact = false;
};

ProbeResult run_probe(const ProbeConfig& config);

struct QuadCheckEntry {
  std::string label;
  int degree = 0;
  std::size_t points = 0;
  bool exact_at_degree = false;
  /// Some monomial of degree + 1 misses by more than 1e-6.
  bool tight = false;
  double worst_above = 0.0;
};

struct QuadCheckReport {
  std::vector<QuadCheckEntry> entries;
  bool builtin_only = true;
  bool passed = false;
};

/// Certifies every built-in rule (and any extra rules) at its declared
/// degree and checks that it fails at degree + 1.
QuadCheckReport run_quadcheck(const std::vector<RefQuadratureRule>& extra = {});

/// "n,h,dofs,l2_error,curl_error,hcurl_error,iters", 17 significant digits.
void write_csv(std::ostream& out, const std::vector<ErrorRecord>& records);
/// Whitespace-separated columns for gnuplot, '#' header.
void write_dat(std::ostream& out, const std::vector<ErrorRecord>& records);
void write_probe_csv(std::ostream& out, const ProbeConfig& config, const ProbeResult& result);
void write_quadcheck(std::ostream& out, const QuadCheckReport& report);

}  // namespace edgefem
