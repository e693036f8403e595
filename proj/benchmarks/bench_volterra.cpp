#include <benchmark/benchmark.h>

#include "pathbs/volterra.hpp"

using namespace pathbs;

namespace {

void bm_zeta_psi(benchmark::State& state) {
  const auto grid = TimeGrid::dyadic(1.0, static_cast<int>(state.range(0)));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_zeta_psi(0.0, 0.3, grid, seed++));
}
BENCHMARK(bm_zeta_psi)->Arg(10)->Arg(14);

void bm_deceptive(benchmark::State& state) {
  DeceptiveSpec spec;
  spec.sigma1 = 0.2;
  spec.sigma2 = 0.3;
  const auto grid = TimeGrid::dyadic(1.0, static_cast<int>(state.range(0)));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(deceptive_path(spec, grid, seed++));
}
BENCHMARK(bm_deceptive)->Arg(14);

}  // namespace
