#include "edgefem/catalog.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace edgefem {

namespace {

CVec3 exact_e(const Vec3& x) {
  const double y = x.y();
  const double z = x.z();
  return CVec3((y * y - 1.0) * (z * z - 1.0), 0.0, 0.0);
}

CVec3 exact_curl(const Vec3& x) {
  const double y = x.y();
  const double z = x.z();
  return CVec3(0.0, 2.0 * z * (y * y - 1.0), -2.0 * y * (z * z - 1.0));
}

CVec3 exact_curl_curl(const Vec3& x) {
  const double y = x.y();
  const double z = x.z();
  return CVec3(4.0 - 2.0 * y * y - 2.0 * z * z, 0.0, 0.0);
}

Problem build(std::string id, double mu0, double omega, std::function<double(double)> eps0) {
  Problem p;
  p.id = std::move(id);
  p.mu0 = mu0;
  p.omega = omega;
  p.exact = {exact_e, exact_curl};
  p.curl_curl = exact_curl_curl;
  const double mu_inv = 1.0 / mu0;
  // J = (i/omega) [mu_inv (4 - 2y^2 - 2z^2) - omega^2 eps0(z) (y^2 - 1)(z^2 - 1)] e_x
  auto current = [mu_inv, omega, eps0](const Vec3& x) -> CVec3 {
    const double y = x.y();
    const double z = x.z();
    const double ex = (y * y - 1.0) * (z * z - 1.0);
    const double bracket = mu_inv * (4.0 - 2.0 * y * y - 2.0 * z * z) - omega * omega * eps0(z) * ex;
    return CVec3(Complex(0.0, bracket / omega), 0.0, 0.0);
  };
  p.coeffs = Coefficients::isotropic([mu_inv](const Vec3&) { return Complex(mu_inv); },
                                     [eps0](const Vec3& x) { return Complex(eps0(x.z())); }, omega,
                                     current);
  return p;
}

}  // namespace

Problem cube_poly() {
  return build("cube_poly", 10.0, 1.0, [](double) { return -10.0; });
}

Problem cube_oscillatory(int m) {
  if (m < 1) throw Error("cube_oscillatory: m must be positive");
  const double k = m * std::numbers::pi;
  return build("cube_oscillatory(" + std::to_string(m) + ")", 10.0, 1.0,
               [k](double z) { return -10.0 - 9.0 * std::sin(k * z); });
}

Problem make_problem(const std::string& id, int m) {
  if (id == "cube_poly") return cube_poly();
  if (id == "cube_oscillatory") return cube_oscillatory(m);
  throw Error("unknown problem '" + id + "'");
}

SelfCheckReport self_check(const Problem& p, int samples, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double h = 1e-5;
  const Complex i_omega(0.0, p.omega);

  auto fd_curl = [h](const VectorField& f, const Vec3& x) -> CVec3 {
    std::array<CVec3, 3> d;
    for (int a = 0; a < 3; ++a) {
      Vec3 xp = x;
      Vec3 xm = x;
      xp(a) += h;
      xm(a) -= h;
      d[a] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return CVec3(d[1](2) - d[2](1), d[2](0) - d[0](2), d[0](1) - d[1](0));
  };

  SelfCheckReport r;
  for (int s = 0; s < samples; ++s) {
    const Vec3 x(unit(rng), unit(rng), unit(rng));
    const CMat3 mu_inv = p.coeffs.mu_inv(x);
    const CMat3 eps = p.coeffs.eps(x);
    // mu_inv is constant in the catalog, so curl(mu_inv curl E) = mu_inv curl curl E.
    const CVec3 residual = mu_inv * p.curl_curl(x) - p.omega * p.omega * (eps * p.exact.value(x)) +
                           i_omega * p.coeffs.current(x);
    const double scale = 1.0 + p.curl_curl(x).norm();
    r.pde_residual = std::max(r.pde_residual, residual.norm() / scale);
    r.curl_mismatch = std::max(r.curl_mismatch, (fd_curl(p.exact.value, x) - p.exact.curl(x)).norm());
    r.curl_curl_mismatch = std::max(r.curl_curl_mismatch, (fd_curl(p.exact.curl, x) - p.curl_curl(x)).norm());
  }
  r.passed = r.pde_residual <= 1e-10 && r.curl_mismatch <= 1e-6 && r.curl_curl_mismatch <= 1e-6;
  return r;
}

}  // namespace edgefem
