#include <benchmark/benchmark.h>

#include <cmath>

#include "pathbs/pvar.hpp"
#include "pathbs/rng.hpp"

using namespace pathbs;

namespace {

SampledPath noise_path(std::size_t cells, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const auto g = TimeGrid::uniform(1.0, cells);
  std::vector<double> v{0.0};
  for (std::size_t k = 0; k < cells; ++k)
    v.push_back(v.back() + rng.normal() * std::sqrt(1.0 / cells));
  return SampledPath::scalar(g, std::move(v));
}

void bm_pvar_exact(benchmark::State& state) {
  const auto path = noise_path(static_cast<std::size_t>(state.range(0)), 7);
  const auto f = increments_field(path);
  for (auto _ : state)
    benchmark::DoNotOptimize(p_variation(f, 2.5, PVarMode::Exact, 4096).value);
}
BENCHMARK(bm_pvar_exact)->Arg(64)->Arg(256)->Arg(1024);

void bm_pvar_dyadic(benchmark::State& state) {
  const auto path = noise_path(static_cast<std::size_t>(state.range(0)), 7);
  const auto f = increments_field(path);
  for (auto _ : state)
    benchmark::DoNotOptimize(p_variation(f, 2.5, PVarMode::DyadicLowerBound).value);
}
BENCHMARK(bm_pvar_dyadic)->Arg(256)->Arg(1024);

void bm_cell_sum_control(benchmark::State& state) {
  const auto path = noise_path(static_cast<std::size_t>(state.range(0)), 7);
  const auto f = increments_field(path);
  for (auto _ : state) benchmark::DoNotOptimize(cell_sum_control(f, 2.5));
}
BENCHMARK(bm_cell_sum_control)->Arg(256)->Arg(1024);

}  // namespace
