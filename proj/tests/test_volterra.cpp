#include <doctest.h>

#include <cmath>

#include "pathbs/rng.hpp"
#include "pathbs/stats.hpp"
#include "pathbs/volterra.hpp"

using namespace pathbs;

TEST_CASE("kernel evaluation and domain guards") {
  KernelParams p{0.0, 0.5, 0.3, 0.8};
  CHECK(kernel_eval(VolterraKernel::K, p) == doctest::Approx(1.0));  // H = 1/2
  p.hurst = 0.3;
  CHECK(kernel_eval(VolterraKernel::K, p) ==
        doctest::Approx(std::pow(0.3 / 0.8, -0.2)).epsilon(1e-14));
  p.s = 0.8;
  CHECK(kernel_eval(VolterraKernel::R, p) == doctest::Approx(0.8));  // R(t0,t,t) = t - t0
  CHECK(kernel_eval(VolterraKernel::RInverse, p) == doctest::Approx(1.0 / 0.8));
  p.s = 0.9;
  CHECK_THROWS(kernel_eval(VolterraKernel::K, p));  // s > t
  p.s = 0.0;
  CHECK_THROWS(kernel_eval(VolterraKernel::K, p));  // s = t0
}

TEST_CASE("kernel square-integral identities against adaptive quadrature") {
  const double H = 0.3, T = 1.0;
  // int_0^s K(u,s) K(u,t) du = R(t0,t,s) / 2H
  const double s = 0.4, t = 0.9;
  const double lhs = integrate(
      [&](double u) {
        if (u <= 0.0) return 0.0;
        KernelParams a{0.0, H, u, s}, b{0.0, H, u, t};
        return kernel_eval(VolterraKernel::K, a) * kernel_eval(VolterraKernel::K, b);
      },
      0.0, s, 1e-11);
  // R_H(t0, t, s) evaluates the covariance formula at reversed arguments:
  // (s - t0)^(H + 1/2) (t - t0)^(1/2 - H)
  const double rhs = std::pow(s, H + 0.5) * std::pow(t, 0.5 - H);
  CHECK(lhs == doctest::Approx(rhs / (2.0 * H)).epsilon(1e-6));

  // double integral of K^2 over the simplex = R^2(t0,T,T) / 4H = T^{2}/4H... at T=1: 1/(4H)
  const double outer = integrate(
      [&](double tt) {
        if (tt <= 0.0) return 0.0;
        return integrate(
            [&](double u) {
              if (u <= 0.0) return 0.0;
              KernelParams k{0.0, H, u, tt};
              const double v = kernel_eval(VolterraKernel::K, k);
              return v * v;
            },
            0.0, tt, 1e-11);
      },
      0.0, T, 1e-9);
  CHECK(outer == doctest::Approx(1.0 / (4.0 * H)).epsilon(1e-6));

  // R_inv convolution identity: int_0^s Rinv(u,s) Rinv(u,t) du = Rinv(t0,s,t)/2H
  const double lhs2 = integrate(
      [&](double u) {
        if (u <= 0.0) return 0.0;
        KernelParams a{0.0, H, u, s}, b{0.0, H, u, t};
        return kernel_eval(VolterraKernel::RInverse, a) * kernel_eval(VolterraKernel::RInverse, b);
      },
      0.0, s, 1e-11);
  CHECK(lhs2 ==
        doctest::Approx(kernel_eval(VolterraKernel::RInverse, {0.0, H, s, t}) / (2.0 * H))
            .epsilon(1e-6));
}

TEST_CASE("covariance kernel monotonicity on random triples") {
  SplitMix64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const double H = 0.1 + rng.uniform();
    double s = 0.05 + 0.9 * rng.uniform();
    double t = 0.05 + 0.9 * rng.uniform();
    if (s > t) std::swap(s, t);
    const double r_ts = kernel_eval(VolterraKernel::R, {0.0, H, t, t});
    const double r_mixed = std::pow(s, H + 0.5) / std::pow(t, H - 0.5);
    CHECK(r_mixed <= r_ts + 1e-12);
  }
}

TEST_CASE("H = 1/2 reduces zeta to the driving Brownian motion") {
  const auto grid = TimeGrid::dyadic(1.0, 8);
  const auto zp = simulate_zeta_psi(0.0, 0.5, grid, 99);
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(zp.zeta.at(k, 0) == doctest::Approx(zp.driving_w.at(k, 0)).epsilon(1e-14));
}

TEST_CASE("same seed gives bit-identical paths") {
  const auto grid = TimeGrid::dyadic(1.0, 6);
  const auto a = simulate_zeta_psi(0.0, 0.3, grid, 4242);
  const auto b = simulate_zeta_psi(0.0, 0.3, grid, 4242);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(a.zeta.at(k, 0) == b.zeta.at(k, 0));
    CHECK(a.psi.at(k, 0) == b.psi.at(k, 0));
  }
}

TEST_CASE("factorized simulation agrees with the direct kernel sum") {
  const double H = 0.3;
  const auto grid = TimeGrid::dyadic(1.0, 5);
  SplitMix64 rng(17);
  std::vector<double> dts(grid.cells());
  for (std::size_t k = 0; k < grid.cells(); ++k) dts[k] = grid[k + 1] - grid[k];
  const auto dw = brownian_increments(rng, dts);
  const auto zp = zeta_psi_from_increments(0.0, H, grid, dw);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    double direct = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      const double s_eval = i == 0 ? 0.5 * grid[1] : grid[i];
      direct += std::pow(s_eval / grid[j], H - 0.5) * dw[i];
    }
    CHECK(zp.zeta.at(j, 0) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("zeta variance and covariance match the kernel formulas") {
  const std::size_t seeds = 10000;
  const auto grid = TimeGrid::dyadic(1.0, 9);
  const std::size_t i_probe = grid.size() / 2, j_probe = grid.size() - 1;
  for (double H : {0.25, 0.5, 0.75}) {
    std::vector<double> zs(seeds), zt(seeds);
    parallel_for_index(seeds, [&](std::size_t i) {
      const auto zp = simulate_zeta_psi(0.0, H, grid, stream_seed(777, i));
      zs[i] = zp.zeta.at(i_probe, 0);
      zt[i] = zp.zeta.at(j_probe, 0);
    });
    const auto st = summarize(zt);
    const double var_theory = 1.0 / (2.0 * H);  // (t - t0)/2H at t = 1
    CHECK(std::fabs(st.variance - var_theory) <= 3.0 * st.se_variance);

    // covariance at (s, t) = (1/2, 1): R_H(0, t, s)/2H = s^{H+1/2} t^{1/2-H} / 2H
    const double s = grid[i_probe];
    const double cov_theory = std::pow(s, H + 0.5) / (2.0 * H);
    const double cov = sample_covariance(zs, zt);
    const double se_cov = (st.variance + cov_theory) / std::sqrt(static_cast<double>(seeds));
    CHECK(std::fabs(cov - cov_theory) <= 3.0 * se_cov);
  }
}

TEST_CASE("semimartingale decomposition residual vanishes under refinement") {
  const double H = 0.3;
  double prev = 1e300;
  for (int lv : {7, 9, 11}) {
    const auto grid = TimeGrid::dyadic(1.0, lv);
    const auto zp = simulate_zeta_psi(0.0, H, grid, 2024);
    // trapezoid of psi with psi(0) = 0
    double integral = 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      integral += 0.5 * (zp.psi.at(k, 0) + zp.psi.at(k + 1, 0)) * (grid[k + 1] - grid[k]);
      const double recon = zp.driving_w.at(k + 1, 0) + (0.5 - H) * integral;
      worst = std::max(worst, std::fabs(zp.zeta.at(k + 1, 0) - recon));
    }
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev < 5e-3);
}

TEST_CASE("zeta marginals pass a normality screen") {
  const std::size_t seeds = 10000;
  const auto grid = TimeGrid::dyadic(1.0, 7);
  std::vector<std::size_t> probes{16, 64, 128};
  std::vector<std::vector<double>> samples(probes.size(), std::vector<double>(seeds));
  parallel_for_index(seeds, [&](std::size_t i) {
    const auto zp = simulate_zeta_psi(0.0, 0.35, grid, stream_seed(31337, i));
    for (std::size_t p = 0; p < probes.size(); ++p) samples[p][i] = zp.zeta.at(probes[p], 0);
  });
  std::size_t pass = 0;
  for (const auto& s : samples)
    if (jarque_bera(s).p_value > 0.01) ++pass;
  CHECK(pass >= 2);  // 95 percent target over 3 probes allows one failure
}

TEST_CASE("deceptive path with equal sigmas is the plain geometric Brownian motion") {
  DeceptiveSpec spec;
  spec.sigma1 = spec.sigma2 = 0.2;
  spec.mu = 0.07;
  spec.x0 = 2.0;
  const auto grid = TimeGrid::dyadic(1.0, 7);
  const auto y = deceptive_path(spec, grid, 5150);
  const auto zp = simulate_zeta_psi(0.0, 0.5, grid, 5150);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double gbm =
        2.0 * std::exp((0.07 - 0.02) * grid[k] + 0.2 * zp.driving_w.at(k, 0));
    CHECK(y.at(k, 0) == doctest::Approx(gbm).epsilon(1e-12));
  }
}

TEST_CASE("deceptive marginal variance follows sigma1 under the matched convention") {
  DeceptiveSpec spec;
  spec.sigma1 = 0.2;
  spec.sigma2 = 0.3;
  spec.mu = 0.05;
  const std::size_t seeds = 10000;
  const auto grid = TimeGrid::dyadic(1.0, 9);
  std::vector<double> logs(seeds);
  parallel_for_index(seeds, [&](std::size_t i) {
    const auto y = deceptive_path(spec, grid, stream_seed(999, i));
    logs[i] = std::log(y.at(grid.size() - 1, 0));
  });
  const auto s = summarize(logs);
  CHECK(std::fabs(s.variance - 0.04) <= 3.0 * s.se_variance);
  CHECK(std::fabs(s.mean - (0.05 - 0.02)) <= 3.0 * s.se_mean);

  // as-printed convention: variance is sigma2^4/sigma1^2 (t - t0) instead
  spec.convention = HConvention::AsPrinted;
  std::vector<double> logs2(seeds);
  parallel_for_index(seeds, [&](std::size_t i) {
    const auto y = deceptive_path(spec, grid, stream_seed(999, i));
    logs2[i] = std::log(y.at(grid.size() - 1, 0));
  });
  const auto s2 = summarize(logs2);
  const double printed_var = std::pow(0.3, 4) / 0.04;
  CHECK(std::fabs(s2.variance - printed_var) <= 3.0 * s2.se_variance);
}

TEST_CASE("single-cell concatenation is the deceptive path itself") {
  DeceptiveSpec spec;
  spec.sigma1 = 0.2;
  spec.sigma2 = 0.3;
  const auto pi = TimeGrid::uniform(1.0, 1);
  const auto y = grid_concatenated_path(pi, spec, 64, 31);
  const auto direct = deceptive_path(spec, TimeGrid::uniform(1.0, 64), 31);
  for (std::size_t k = 0; k < y.size(); ++k)
    CHECK(y.at(k, 0) == doctest::Approx(direct.at(k, 0)).epsilon(1e-12));
}

TEST_CASE("concatenated increments are independent across cells") {
  DeceptiveSpec spec;
  spec.sigma1 = 0.2;
  spec.sigma2 = 0.3;
  spec.mu = 0.05;
  const auto pi = TimeGrid::uniform(1.0, 4);
  const std::size_t seeds = 10000;
  std::vector<double> inc1(seeds), inc2(seeds);
  parallel_for_index(seeds, [&](std::size_t i) {
    const auto y = grid_concatenated_path(pi, spec, 32, stream_seed(555, i));
    const auto& g = y.grid();
    inc1[i] = std::log(y.at(g.index_of(0.5), 0)) - std::log(y.at(g.index_of(0.25), 0));
    inc2[i] = std::log(y.at(g.index_of(0.75), 0)) - std::log(y.at(g.index_of(0.5), 0));
  });
  const double cov = sample_covariance(inc1, inc2);
  const auto s1 = summarize(inc1);
  const auto s2 = summarize(inc2);
  const double se = std::sqrt(s1.variance * s2.variance / static_cast<double>(seeds));
  CHECK(std::fabs(cov) <= 3.0 * se);
}

TEST_CASE("dyadic limit demo closed form and Monte Carlo") {
  // closed form sweeps: k fixed, n up -> 0; n fixed, k up -> 1
  const double eps = 0.01;
  CHECK(dyadic_limit_demo(0.0, 12, eps, 100).closed_form < 1e-6);
  CHECK(dyadic_limit_demo(200.0, 3, eps, 100).closed_form > 0.99);
  double prev = 1.0;
  for (int n : {2, 5, 8, 11}) {
    const double cf = dyadic_limit_demo(5.0, n, eps, 100).closed_form;
    CHECK(cf <= prev + 1e-15);
    prev = cf;
  }
  // MC agreement at (k, n, eps) = (10, 4, 0.05)
  const auto res = dyadic_limit_demo(10.0, 4, 0.05, 100000, 1234);
  CHECK(std::fabs(res.mc_estimate - res.closed_form) <= 3.0 * res.mc_std_error + 1e-6);
}

TEST_CASE("kolmogorov-smirnov plumbing sanity") {
  // uniform sample against the uniform CDF passes, against a wrong CDF fails
  SplitMix64 rng(9001);
  std::vector<double> u(5000);
  for (auto& x : u) x = rng.uniform();
  const auto ok = ks_test(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(ok.p_value > 0.01);
  const auto bad = ks_test(u, [](double x) { return std::clamp(x * x, 0.0, 1.0); });
  CHECK(bad.p_value < 1e-6);
  CHECK_THROWS(ks_test(std::vector<double>(10, 0.5), [](double) { return 0.5; }));
}

TEST_CASE("zeta covariance matches the kernel on a five-point probe grid") {
  const double H = 0.35;
  const std::size_t seeds = 10000;
  const auto grid = TimeGrid::uniform(1.0, 10);
  const std::size_t probes[5] = {2, 4, 6, 8, 10};
  std::vector<std::vector<double>> z(5, std::vector<double>(seeds));
  parallel_for_index(seeds, [&](std::size_t i) {
    const auto zp = simulate_zeta_psi(0.0, H, grid, stream_seed(808, i));
    for (std::size_t p = 0; p < 5; ++p) z[p][i] = zp.zeta.at(probes[p], 0);
  });
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = a; b < 5; ++b) {
      const double s = grid[probes[a]], t = grid[probes[b]];
      const double theory = std::pow(s, H + 0.5) * std::pow(t, 0.5 - H) / (2.0 * H);
      const double cov = a == b ? summarize(z[a]).variance : sample_covariance(z[a], z[b]);
      const double vs = summarize(z[a]).variance, vt = summarize(z[b]).variance;
      const double se = std::sqrt((vs * vt + cov * cov) / static_cast<double>(seeds));
      CHECK(std::fabs(cov - theory) <= 3.0 * se + 1e-3);
    }
}
