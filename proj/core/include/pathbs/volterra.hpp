#pragma once

#include <cstdint>

#include "pathbs/grid.hpp"

namespace pathbs {

enum class VolterraKernel { K, R, RInverse };

struct KernelParams {
  double t0 = 0.0;
  double hurst = 0.5;
  double s = 0.0;
  double t = 0.0;
};

// K_H(t0,s,t) = ((s-t0)/(t-t0))^(H-1/2), R_H = (t-t0)^(H+1/2)/(s-t0)^(H-1/2),
// R_H^{-1} its reciprocal. Requires t0 < s <= t and H > 0.
double kernel_eval(VolterraKernel kind, const KernelParams& params);

/**
 * Joint simulation of the Volterra pair on a grid starting at t0:
 *   zeta(t) = int_t0^t K_H(t0,s,t) dW_s = (t-t0)^(1/2-H) M_t
 *   psi(t)  = int_t0^t R_H^{-1}(t0,s,t) dW_s = (t-t0)^(-1/2-H) M_t
 * with the shared martingale M_t = int (s-t0)^(H-1/2) dW_s. Kernel weights
 * are left-endpoint with a midpoint first cell (the kernel singularity at
 * s = t0 is integrable). One seed drives zeta, psi and W together.
 */
struct ZetaPsiPaths {
  SampledPath zeta;
  SampledPath psi;        // psi(t0) := 0
  SampledPath driving_w;  // W_t - W_{t0}
};
ZetaPsiPaths simulate_zeta_psi(double t0, double hurst, const TimeGrid& grid, std::uint64_t seed);

// As above but driven by caller-supplied Brownian increments over the cells.
ZetaPsiPaths zeta_psi_from_increments(double t0, double hurst, const TimeGrid& grid,
                                      const std::vector<double>& dw);

// ell(t,t0,mu,sigma) = (mu - sigma^2/2)(t - t0)
double linear_drag(double t, double t0, double mu, double sigma);

enum class HConvention {
  AsPrinted,        // H = sigma1^2 / (2 sigma2^2)
  VarianceMatched,  // H = sigma2^2 / (2 sigma1^2); matches Var log Y = sigma1^2 (t-t0)
};

struct DeceptiveSpec {
  double x0 = 1.0;
  double mu = 0.0;
  double sigma1 = 0.2;
  double sigma2 = 0.3;
  double t0 = 0.0;
  HConvention convention = HConvention::VarianceMatched;

  double effective_hurst() const;
  void validate() const;
};

// Y_t = x0 exp(sigma2 zeta(t,t0,H_eff) + ell(t,t0,mu,sigma1)).
SampledPath deceptive_path(const DeceptiveSpec& spec, const TimeGrid& grid, std::uint64_t seed);

// Grid-concatenated deceptive process: log Y restarts an independent zeta
// block on every cell of the coarse grid pi; `fine_per_cell` simulation
// points per block.
SampledPath grid_concatenated_path(const TimeGrid& pi, const DeceptiveSpec& spec,
                                   std::size_t fine_per_cell, std::uint64_t seed);

struct DyadicLimitResult {
  double closed_form = 0.0;
  double mc_estimate = 0.0;
  double mc_std_error = 0.0;
};

// P( |(H[pi_{n+1}].X)_1 - (H[pi_n].X)_1| > eps ) under the drift-k measure for
// H_s = s on dyadic partitions: closed form
// Phi(k s_n - eps 2^{n+1}/s_n) + Phi(-eps 2^{n+1}/s_n - k s_n),
// s_n = sqrt(1 - 2^{-(n+1)}), against a Monte Carlo estimate of
// 2^{-(n+1)} X_{2^{-(n+1)},1}.
DyadicLimitResult dyadic_limit_demo(double k, int n, double eps, std::size_t mc_draws = 100000,
                                    std::uint64_t seed = 17);

}  // namespace pathbs
