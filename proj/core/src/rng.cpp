#include "pathbs/rng.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "pathbs/stats.hpp"

namespace pathbs {

double SplitMix64::normal() { return normal_icdf(uniform()); }

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
  // one splitmix step over base xor index keeps streams decorrelated
  SplitMix64 mix(base ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  return mix.next();
}

std::vector<double> brownian_increments(SplitMix64& rng, const std::vector<double>& dts) {
  std::vector<double> dw(dts.size());
  for (std::size_t k = 0; k < dts.size(); ++k) {
    if (!(dts[k] > 0.0)) throw std::invalid_argument("brownian_increments: dt must be positive");
    dw[k] = rng.normal() * std::sqrt(dts[k]);
  }
  return dw;
}

void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn) {
  unsigned n_threads = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("PATHBS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n_threads = static_cast<unsigned>(v);
  }
  if (n_threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(count));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace pathbs
