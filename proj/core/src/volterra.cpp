#include "pathbs/volterra.hpp"

#include <cmath>
#include <stdexcept>

#include "pathbs/rng.hpp"
#include "pathbs/stats.hpp"

namespace pathbs {

double kernel_eval(VolterraKernel kind, const KernelParams& p) {
  if (!(p.hurst > 0.0)) throw std::invalid_argument("kernel_eval: H must be positive");
  if (!(p.t0 < p.s) || !(p.s <= p.t))
    throw std::invalid_argument("kernel_eval: need t0 < s <= t");
  const double a = p.s - p.t0;
  const double b = p.t - p.t0;
  switch (kind) {
    case VolterraKernel::K: return std::pow(a / b, p.hurst - 0.5);
    case VolterraKernel::R: return std::pow(b, p.hurst + 0.5) / std::pow(a, p.hurst - 0.5);
    case VolterraKernel::RInverse:
      return std::pow(a, p.hurst - 0.5) / std::pow(b, p.hurst + 0.5);
  }
  return 0.0;
}

ZetaPsiPaths zeta_psi_from_increments(double t0, double hurst, const TimeGrid& grid,
                                      const std::vector<double>& dw) {
  if (!(hurst > 0.0)) throw std::invalid_argument("zeta_psi: H must be positive");
  if (!(grid[0] == 0.0))
    throw std::invalid_argument("zeta_psi: grid times are offsets from t0, starting at 0");
  const std::size_t n = grid.size();
  if (dw.size() != n - 1) throw std::invalid_argument("zeta_psi: increment count mismatch");

  // zeta(t) = (t-t0)^(1/2-H) M_t, psi(t) = (t-t0)^(-1/2-H) M_t with the
  // martingale M accumulating (s-t0)^(H-1/2) dW_s; left-endpoint weights,
  // midpoint on the first cell where the kernel is singular
  std::vector<double> zeta(n, 0.0), psi(n, 0.0), w(n, 0.0);
  double M = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double s_eval = k == 0 ? 0.5 * (grid[0] + grid[1]) : grid[k];
    M += std::pow(s_eval, hurst - 0.5) * dw[k];
    w[k + 1] = w[k] + dw[k];
    const double elapsed = grid[k + 1];
    zeta[k + 1] = std::pow(elapsed, 0.5 - hurst) * M;
    psi[k + 1] = std::pow(elapsed, -0.5 - hurst) * M;
  }
  (void)t0;
  ZetaPsiPaths out{SampledPath::scalar(grid, std::move(zeta)),
                   SampledPath::scalar(grid, std::move(psi)),
                   SampledPath::scalar(grid, std::move(w))};
  return out;
}

ZetaPsiPaths simulate_zeta_psi(double t0, double hurst, const TimeGrid& grid, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> dts(grid.cells());
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) dts[k] = grid[k + 1] - grid[k];
  const auto dw = brownian_increments(rng, dts);
  return zeta_psi_from_increments(t0, hurst, grid, dw);
}

double linear_drag(double t, double t0, double mu, double sigma) {
  return (mu - 0.5 * sigma * sigma) * (t - t0);
}

double DeceptiveSpec::effective_hurst() const {
  return convention == HConvention::AsPrinted ? sigma1 * sigma1 / (2.0 * sigma2 * sigma2)
                                              : sigma2 * sigma2 / (2.0 * sigma1 * sigma1);
}

void DeceptiveSpec::validate() const {
  if (!(x0 > 0.0) || !(sigma1 > 0.0) || !(sigma2 > 0.0))
    throw std::invalid_argument("DeceptiveSpec: x0, sigma1, sigma2 must be positive");
  if (!(effective_hurst() > 0.0)) throw std::invalid_argument("DeceptiveSpec: bad Hurst value");
}

SampledPath deceptive_path(const DeceptiveSpec& spec, const TimeGrid& grid, std::uint64_t seed) {
  spec.validate();
  const auto zp = simulate_zeta_psi(spec.t0, spec.effective_hurst(), grid, seed);
  std::vector<double> y(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    y[k] = spec.x0 * std::exp(spec.sigma2 * zp.zeta.at(k, 0) +
                              linear_drag(grid[k], 0.0, spec.mu, spec.sigma1));
  return SampledPath::scalar(grid, std::move(y));
}

SampledPath grid_concatenated_path(const TimeGrid& pi, const DeceptiveSpec& spec,
                                   std::size_t fine_per_cell, std::uint64_t seed) {
  spec.validate();
  if (fine_per_cell == 0) throw std::invalid_argument("grid_concatenated_path: empty cells");
  const double H = spec.effective_hurst();
  SplitMix64 rng(seed);

  std::vector<double> times{0.0};
  std::vector<double> logy{std::log(spec.x0)};
  double base = std::log(spec.x0);
  for (std::size_t c = 0; c + 1 < pi.size(); ++c) {
    const double u = pi[c], u_next = pi[c + 1];
    const double span = u_next - u;
    TimeGrid block = TimeGrid::uniform(span, fine_per_cell);
    std::vector<double> dts(fine_per_cell, span / static_cast<double>(fine_per_cell));
    const auto dw = brownian_increments(rng, dts);
    const auto zp = zeta_psi_from_increments(0.0, H, block, dw);
    for (std::size_t k = 1; k < block.size(); ++k) {
      times.push_back(u + block[k]);
      logy.push_back(base + spec.sigma2 * zp.zeta.at(k, 0) +
                     linear_drag(block[k], 0.0, spec.mu, spec.sigma1));
    }
    base = logy.back();
  }
  std::vector<double> y(logy.size());
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = std::exp(logy[k]);
  return SampledPath::scalar(TimeGrid(std::move(times)), std::move(y));
}

DyadicLimitResult dyadic_limit_demo(double k, int n, double eps, std::size_t mc_draws,
                                    std::uint64_t seed) {
  if (n < 1 || !(eps > 0.0)) throw std::invalid_argument("dyadic_limit_demo: need n >= 1, eps > 0");
  DyadicLimitResult out;
  const double half = std::pow(2.0, -(n + 1.0));
  const double sn = std::sqrt(1.0 - half);
  out.closed_form =
      normal_cdf(k * sn - eps / (sn * half)) + normal_cdf(-eps / (sn * half) - k * sn);

  // difference of consecutive dyadic Riemann sums is 2^{-(n+1)} X_{2^{-(n+1)},1};
  // under the drift-k measure that is half * sn * (N + k sn)
  SplitMix64 rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < mc_draws; ++i) {
    const double diff = half * sn * (rng.normal() + k * sn);
    if (std::fabs(diff) > eps) ++hits;
  }
  const double phat = static_cast<double>(hits) / static_cast<double>(mc_draws);
  out.mc_estimate = phat;
  out.mc_std_error = std::sqrt(std::max(phat * (1.0 - phat), 1e-12) / static_cast<double>(mc_draws));
  return out;
}

}  // namespace pathbs
