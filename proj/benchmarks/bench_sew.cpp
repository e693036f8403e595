#include <benchmark/benchmark.h>

#include <cmath>

#include "pathbs/rng.hpp"
#include "pathbs/sewing.hpp"

using namespace pathbs;

namespace {

TwoParamField near_additive_field(std::size_t cells, double gamma) {
  SplitMix64 rng(3);
  const auto g = TimeGrid::uniform(1.0, cells);
  std::vector<double> x{0.0};
  for (std::size_t k = 0; k < cells; ++k)
    x.push_back(x.back() + rng.normal() * std::sqrt(1.0 / cells));
  TwoParamField f(g, FieldShape::Scalar);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i; j < g.size(); ++j)
      f.value(i, j) = x[j] - x[i] + 0.5 * std::pow(g[j] - g[i], gamma);
  return f;
}

void bm_sew(benchmark::State& state) {
  const std::size_t cells = static_cast<std::size_t>(state.range(0));
  const auto f = near_additive_field(cells, 1.5);
  const auto omega = ControlField::length(f.grid());
  for (auto _ : state) benchmark::DoNotOptimize(sew(f, omega, 1.5));
}
BENCHMARK(bm_sew)->Arg(128)->Arg(256)->Arg(512);

}  // namespace
