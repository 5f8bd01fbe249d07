#include <benchmark/benchmark.h>

#include "edgefem/catalog.hpp"
#include "edgefem/solver.hpp"

using namespace edgefem;

namespace {

void BM_ElementMatrices(benchmark::State& state) {
  const CurlBasis basis(static_cast<int>(state.range(0)));
  const ElementIntegrator integrator(basis, QuadratureConfig::uniform(builtin_rule("pt15")));
  const Problem p = cube_oscillatory(10);
  Mat3 j;
  j << 0.5, 0.1, 0.0, 0.0, 0.4, 0.1, 0.1, 0.0, 0.6;
  const AffineMap map(Vec3(0.1, 0.2, 0.3), j);
  const OrientationKey key = orientation_key({4, 1, 7, 2});
  for (auto _ : state) benchmark::DoNotOptimize(integrator.compute(map, p.coeffs, key));
}
BENCHMARK(BM_ElementMatrices)->Arg(1)->Arg(2);

void BM_Assemble(benchmark::State& state) {
  const TetMesh mesh = structured_cube_mesh(static_cast<int>(state.range(1)));
  const Problem p = cube_poly();
  const auto q = QuadratureConfig::uniform(builtin_rule("pt5"));
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, k, p.coeffs, q));
  state.counters["tets"] = static_cast<double>(mesh.num_tets());
}
BENCHMARK(BM_Assemble)->Args({1, 8})->Args({1, 16})->Args({2, 6})->Unit(benchmark::kMillisecond);

void BM_ConjugateGradient(benchmark::State& state) {
  const TetMesh mesh = structured_cube_mesh(static_cast<int>(state.range(0)));
  const auto system = assemble(mesh, 1, cube_poly().coeffs, QuadratureConfig::uniform(builtin_rule("pt4")));
  int iterations = 0;
  for (auto _ : state) {
    const auto r = conjugate_gradient(system.matrix, system.rhs, 1e-10, 20000);
    iterations = r.report.iterations;
    benchmark::DoNotOptimize(r.x.data());
  }
  state.counters["dofs"] = static_cast<double>(system.n_free);
  state.counters["iters"] = iterations;
}
BENCHMARK(BM_ConjugateGradient)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_StructuredMesh(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(structured_cube_mesh(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_StructuredMesh)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
