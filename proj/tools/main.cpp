// edgefem: command line driver for the convergence studies.
//
//   edgefem quad-check    [--rules FILE] [--out DIR] [--assert]
//   edgefem convergence   [--config FILE] [--out DIR] [--assert] [--expect-slope S] [--slope-tol T]
//   edgefem preasymptotic [--config FILE] [--out DIR] [--assert]
//   edgefem probe         [--config FILE] [--out DIR] [--assert] [--min-slope S]
//
// Exit status: 0 on success, 1 on error, 2 when --assert finds a violated
// threshold.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgefem/experiments.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace edgefem;

namespace {

constexpr int kAssertFailed = 2;

json load_config(const std::string& path, const std::set<std::string>& allowed) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  json j = json::parse(in);
  if (!j.is_object()) throw Error("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw Error("unknown config key '" + key + "'");
  return j;
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ExperimentConfig experiment_config(const std::string& path, ExperimentConfig c = {}) {
  const json j = load_config(path, {"problem", "m", "order", "meshes", "q1", "q2", "q3", "tol", "max_iter",
                                    "error_degree", "fit_window"});
  read(j, "problem", c.problem);
  read(j, "m", c.m);
  read(j, "order", c.order);
  read(j, "meshes", c.meshes);
  read(j, "q1", c.q1);
  read(j, "q2", c.q2);
  read(j, "q3", c.q3);
  read(j, "tol", c.tol);
  read(j, "max_iter", c.max_iter);
  read(j, "error_degree", c.error_degree);
  read(j, "fit_window", c.fit_window);
  validate(c);
  return c;
}

ProbeConfig probe_config(const std::string& path) {
  const json j = load_config(path, {"kind", "order", "coefficients", "q1", "q2", "q3", "meshes", "mode", "rule",
                                    "shrink", "seed"});
  ProbeConfig c;
  read(j, "kind", c.kind);
  read(j, "order", c.order);
  read(j, "coefficients", c.coefficients);
  read(j, "q1", c.q1);
  read(j, "q2", c.q2);
  read(j, "q3", c.q3);
  read(j, "meshes", c.meshes);
  read(j, "mode", c.mode);
  read(j, "rule", c.rule);
  read(j, "shrink", c.shrink);
  read(j, "seed", c.seed);
  validate(c);
  return c;
}

std::ofstream open_out(const fs::path& dir, const char* name) {
  std::ofstream out(dir / name);
  if (!out) throw Error("cannot write " + (dir / name).string());
  return out;
}

void print_record(const ErrorRecord& r) {
  std::fprintf(stderr, "  n=%-3d dofs=%-8zu hcurl=%.6e iters=%d\n", r.n, r.dofs, r.hcurl_error, r.iterations);
}

std::string fit_line(const char* axis, const std::optional<RateFit>& f) {
  if (!f) return std::string(axis) + ": not enough meshes\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: slope %.6f over %d meshes (rms residual %.3e)\n", axis, f->slope, f->points,
                f->residual);
  return buf;
}

void write_tables(const fs::path& dir, const std::vector<ErrorRecord>& records) {
  auto csv = open_out(dir, "results.csv");
  write_csv(csv, records);
  auto dat = open_out(dir, "results.dat");
  write_dat(dat, records);
}

std::string describe(const ExperimentConfig& c) {
  std::ostringstream s;
  s << "problem " << c.problem;
  if (c.problem == "cube_oscillatory") s << " m=" << c.m;
  s << ", k=" << c.order << ", q1=" << c.q1 << " q2=" << c.q2 << " q3=" << c.q3 << '\n';
  return s.str();
}

// ---------------------------------------------------------------------------
int cmd_quadcheck(const std::string& rules_path, const fs::path& out_dir, bool assert_mode) {
  std::vector<RefQuadratureRule> extra;
  if (!rules_path.empty()) {
    std::ifstream in(rules_path);
    if (!in) throw Error("cannot open rules file " + rules_path);
    extra = read_rules(in);
  }
  const QuadCheckReport report = run_quadcheck(extra);
  std::ostringstream text;
  write_quadcheck(text, report);
  std::cout << text.str();
  open_out(out_dir, "summary.txt") << text.str();
  return assert_mode && !report.passed ? kAssertFailed : 0;
}

int cmd_convergence(const std::string& config_path, const fs::path& out_dir, bool assert_mode,
                    std::optional<double> expect_slope, std::optional<double> slope_tol) {
  const ExperimentConfig c = experiment_config(config_path);
  std::fprintf(stderr, "%s", describe(c).c_str());
  const ConvergenceResult r = run_convergence(c, print_record);
  write_tables(out_dir, r.records);

  const double target = expect_slope.value_or(-c.order / 3.0);
  const double tol = slope_tol.value_or(c.order == 1 ? 0.05 : 0.08);
  std::string summary = describe(c) + fit_line("dofs", r.fit_dofs) + fit_line("h", r.fit_h);
  if (!r.complete) summary += "incomplete: " + r.failure + '\n';
  bool ok = r.complete && r.fit_dofs && std::abs(r.fit_dofs->slope - target) <= tol;
  char buf[128];
  std::snprintf(buf, sizeof buf, "expected dofs slope %.4f +- %.3f: %s\n", target, tol, ok ? "met" : "NOT met");
  summary += buf;
  std::cout << summary;
  open_out(out_dir, "summary.txt") << summary;
  return assert_mode && !ok ? kAssertFailed : 0;
}

int cmd_preasymptotic(const std::string& config_path, const fs::path& out_dir, bool assert_mode) {
  const ExperimentConfig c = experiment_config(config_path, preasymptotic_defaults());
  std::fprintf(stderr, "%s", describe(c).c_str());
  const PreasymptoticResult r = run_preasymptotic(c, print_record);
  write_tables(out_dir, r.run.records);

  std::string summary = describe(c) + fit_line("dofs", r.run.fit_dofs);
  if (!r.run.complete) summary += "incomplete: " + r.run.failure + '\n';
  if (r.plateau_exit) {
    const ErrorRecord& e = r.run.records[*r.plateau_exit];
    summary += "plateau exit at mesh index " + std::to_string(*r.plateau_exit) + " (n=" + std::to_string(e.n) +
               ", " + std::to_string(e.dofs) + " free DOFs)\n";
  } else {
    summary += "no 20% error drop observed\n";
  }
  std::cout << summary;
  open_out(out_dir, "summary.txt") << summary;
  return assert_mode && !(r.run.complete && r.plateau_exit) ? kAssertFailed : 0;
}

int cmd_probe(const std::string& config_path, const fs::path& out_dir, bool assert_mode,
              std::optional<double> min_slope) {
  const ProbeConfig c = probe_config(config_path);
  const ProbeResult r = run_probe(c);
  auto csv = open_out(out_dir, "results.csv");
  write_probe_csv(csv, c, r);

  std::string summary = c.kind + " probe, k=" + std::to_string(c.order) + '\n';
  if (r.exact) {
    summary += "slope: exact (all errors <= 1e-10)\n";
  } else {
    summary += fit_line(c.kind == "curved" ? "error vs s" : "sesquilinear vs h", r.fit);
    if (c.kind == "consistency") summary += fit_line("antilinear vs h", r.load_fit);
  }
  bool ok = true;
  if (min_slope) ok = r.exact || (r.fit && r.fit->slope >= *min_slope);
  else if (c.kind == "consistency" && c.coefficients == "constant") ok = r.exact;
  std::cout << summary;
  open_out(out_dir, "summary.txt") << summary;
  return assert_mode && !ok ? kAssertFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edgefem: H(curl) finite elements with quadrature, convergence studies"};
  app.require_subcommand(1);

  std::string config_path;
  std::string rules_path;
  std::string out_dir = ".";
  bool assert_mode = false;
  std::optional<double> expect_slope;
  std::optional<double> slope_tol;
  std::optional<double> min_slope;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (created if missing)");
    sub->add_flag("--assert", assert_mode, "exit with status 2 when a threshold is violated");
  };

  CLI::App* quad = app.add_subcommand("quad-check", "certify the built-in quadrature rules");
  common(quad);
  quad->add_option("--rules", rules_path, "extra rules to certify")->check(CLI::ExistingFile);

  CLI::App* conv = app.add_subcommand("convergence", "H(curl) error against mesh size");
  common(conv);
  conv->add_option("--expect-slope", expect_slope, "expected slope against free DOFs (default -k/3)");
  conv->add_option("--slope-tol", slope_tol, "tolerance on the slope (default 0.05 for k=1, 0.08 for k=2)");

  CLI::App* pre = app.add_subcommand("preasymptotic", "plateau exit for the oscillatory permittivity");
  common(pre);

  CLI::App* probe = app.add_subcommand("probe", "consistency or curved-element quadrature probe");
  common(probe);
  probe->add_option("--min-slope", min_slope, "minimum fitted slope");

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out(out_dir);
    fs::create_directories(out);
    if (*quad) {
      if (!config_path.empty()) {
        const json j = load_config(config_path, {"rules"});
        if (rules_path.empty()) read(j, "rules", rules_path);
      }
      return cmd_quadcheck(rules_path, out, assert_mode);
    }
    if (*conv) return cmd_convergence(config_path, out, assert_mode, expect_slope, slope_tol);
    if (*pre) return cmd_preasymptotic(config_path, out, assert_mode);
    return cmd_probe(config_path, out, assert_mode, min_slope);
  } catch (const json::exception& e) {
    std::cerr << "edgefem: bad config: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "edgefem: " << e.what() << '\n';
  }
  return 1;
}
