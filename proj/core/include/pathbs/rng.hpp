#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace pathbs {

// SplitMix64: tiny deterministic generator used for all simulation noise.
// Independent Monte Carlo streams come from stream_seed(base, index).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in (0,1), never returns exactly 0 or 1
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal via inverse-CDF (deterministic across platforms)
  double normal();

  std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
  std::uint64_t state_;
};

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index);

// n i.i.d. standard normal increments scaled by sqrt(dt) each; the Brownian
// increment vector shared by the Volterra constructions.
std::vector<double> brownian_increments(SplitMix64& rng, const std::vector<double>& dts);

// Runs fn(i) for i in [0, count) on a small thread pool. Results must land in
// pre-sized slots so the output is independent of scheduling.
void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace pathbs
