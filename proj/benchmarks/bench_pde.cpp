#include <benchmark/benchmark.h>

#include "pathbs/pde.hpp"

using namespace pathbs;

namespace {

void bm_solve_call(benchmark::State& state) {
  const std::size_t cells = static_cast<std::size_t>(state.range(0));
  SchemeParams sp;
  sp.space_cells = cells;
  sp.time_steps = cells;
  sp.center_spot = 100.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_pde(PayoffSpec::call(100.0), LocalVolSpec::black_scholes(0.2), 0.05, 1.0, sp));
}
BENCHMARK(bm_solve_call)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void bm_greeks(benchmark::State& state) {
  SchemeParams sp;
  sp.space_cells = 400;
  sp.time_steps = 400;
  sp.center_spot = 100.0;
  const auto sol =
      solve_pde(PayoffSpec::call(100.0), LocalVolSpec::black_scholes(0.2), 0.05, 1.0, sp);
  double z = 80.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sol.greeks(0.4, z));
    z = z < 120.0 ? z + 0.01 : 80.0;
  }
}
BENCHMARK(bm_greeks);

}  // namespace
