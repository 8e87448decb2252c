#include <benchmark/benchmark.h>

#include "entkit/assistance.hpp"
#include "entkit/ensembles.hpp"
#include "entkit/measures.hpp"
#include "entkit/qmath.hpp"
#include "entkit/rng.hpp"
#include "entkit/states.hpp"

namespace {

using namespace entkit;

void bm_hermitian_eig_16(benchmark::State& state) {
  Prng rng(7);
  const Mat rho = random_density_matrix(rng, 16);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(rho));
}
BENCHMARK(bm_hermitian_eig_16);

void bm_schmidt_64x16(benchmark::State& state) {
  Prng rng(7);
  const Vec psi = random_state_vector(rng, 64 * 16);
  for (auto _ : state) benchmark::DoNotOptimize(schmidt(psi, 64, 16));
}
BENCHMARK(bm_schmidt_64x16);

void bm_tensor_32x32(benchmark::State& state) {
  Prng rng(7);
  const Vec a = random_state_vector(rng, 32);
  const Vec b = random_state_vector(rng, 32);
  for (auto _ : state) benchmark::DoNotOptimize(tensor(a, b));
}
BENCHMARK(bm_tensor_32x32);

// One objective evaluation of the decomposition search on the catalog state.
void bm_roof_objective(benchmark::State& state) {
  const std::vector<Vec> us{make_u(0), make_u(1)};
  Prng rng(7);
  const Mat v = random_isometry(rng, 4, 2);
  const RootMeasure& entropy = root_measure("entropy");
  for (auto _ : state)
    benchmark::DoNotOptimize(
        ensemble_from_isometry(us, v).average(entropy, 8, 4));
}
BENCHMARK(bm_roof_objective);

void bm_span_deficit(benchmark::State& state) {
  const cplx x{0.8, 0.0};
  const cplx y{0.36, 0.48};
  for (auto _ : state) benchmark::DoNotOptimize(span_deficit(x, y));
}
BENCHMARK(bm_span_deficit);

}  // namespace

BENCHMARK_MAIN();
