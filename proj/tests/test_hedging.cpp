#include <doctest.h>

#include <cmath>

#include "pathbs/hedging.hpp"
#include "pathbs/rng.hpp"
#include "pathbs/stats.hpp"

using namespace pathbs;

namespace {

struct Setup {
  double sigma = 0.2, r = 0.05, K = 100.0, T = 1.0, S0 = 100.0, mu = 0.08;
  PdeSolution sol;
  Setup(double sig = 0.2, std::size_t cells = 400) : sigma(sig), sol(make(sig, cells)) {}
  PdeSolution make(double sig, std::size_t cells) const {
    SchemeParams sp;
    sp.space_cells = cells;
    sp.time_steps = cells;
    sp.center_spot = 100.0;
    return solve_pde(PayoffSpec::call(100.0), LocalVolSpec::black_scholes(sig), 0.05, 1.0, sp);
  }
};

SampledPath gbm(const TimeGrid& g, double s0, double mu, double sigma, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v{s0};
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    const double h = g[k + 1] - g[k];
    v.push_back(v.back() *
                std::exp((mu - 0.5 * sigma * sigma) * h + sigma * std::sqrt(h) * rng.normal()));
  }
  return SampledPath::scalar(g, std::move(v));
}

}  // namespace

TEST_CASE("one-step ledger reproduces the rearranged financing identity") {
  const Setup su;
  const auto grid = TimeGrid({0.0, 1.0});
  const auto fine = TimeGrid::dyadic(1.0, 4);
  const auto path = gbm(fine, su.S0, su.mu, su.sigma, 3);
  DeltaHedgeOptions opt;
  opt.expiry_buffer_steps = 0;
  const auto led = discrete_delta_hedge(su.sol, path, grid, su.r, opt);

  const double w0 = su.sol.w(0.0, su.S0);
  const double H0 = led.nodes[0].stock_units;
  const double sT = path.at(fine.size() - 1, 0);
  const double wT = std::exp(-su.r * su.T) * su.sol.payoff(sT);
  const double xT = std::exp(-su.r * su.T) * sT;
  const double expected =
      led.initial_value + std::exp(su.r * su.T) * ((wT - w0) - H0 * (xT - su.S0));
  CHECK(led.nodes.back().financing_cost_post == doctest::Approx(expected).epsilon(1e-12));
  CHECK(led.initial_value == doctest::Approx(w0).epsilon(1e-12));
}

TEST_CASE("ledger value identity and financing identity on a realistic grid") {
  const Setup su;
  const auto grid = TimeGrid::dyadic(1.0, 6);
  const auto path = gbm(grid, su.S0, su.mu, su.sigma, 11);
  DeltaHedgeOptions opt;
  opt.expiry_buffer_steps = 0;
  const auto led = discrete_delta_hedge(su.sol, path, grid, su.r, opt);

  // V = positions . prices at every node
  for (const auto& nd : led.nodes)
    CHECK(nd.value ==
          doctest::Approx(nd.cash_units * std::exp(su.r * nd.t) + nd.stock_units * nd.stock_price)
              .epsilon(1e-12));

  // financing cost recomputed from the rearranged sum over completed cells
  double acc = led.initial_value;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const auto& a = led.nodes[k];
    const auto& b = led.nodes[k + 1];
    const double s0_next = std::exp(su.r * b.t);
    const double w_a = a.cash_units + a.stock_units * std::exp(-su.r * a.t) * a.stock_price;
    const double w_b = k + 2 == grid.size()
                           ? std::exp(-su.r * su.T) * led.payoff
                           : b.cash_units + b.stock_units * std::exp(-su.r * b.t) * b.stock_price;
    const double xs = std::exp(-su.r * a.t) * a.stock_price;
    const double xt = std::exp(-su.r * b.t) * b.stock_price;
    acc += s0_next * ((w_b - w_a) - a.stock_units * (xt - xs));
    CHECK(led.nodes[k + 1].financing_cost_post ==
          doctest::Approx(acc).epsilon(1e-10));
  }
}

TEST_CASE("discrete hedging shortfall shrinks at the classical rate") {
  const Setup su;
  const std::size_t seeds = 200;
  std::vector<double> log_n, log_err;
  for (int lv : {5, 7, 9}) {
    const auto grid = TimeGrid::dyadic(1.0, lv);
    std::vector<double> absfall(seeds);
    parallel_for_index(seeds, [&](std::size_t i) {
      const auto path = gbm(grid, su.S0, su.mu, su.sigma, stream_seed(900, i));
      absfall[i] = std::fabs(discrete_delta_hedge(su.sol, path, grid, su.r).terminal_shortfall);
    });
    double mean = 0.0;
    for (double a : absfall) mean += a;
    mean /= seeds;
    log_n.push_back(lv * std::log(2.0));
    log_err.push_back(std::log(mean));
  }
  const double slope =
      -(log_err.back() - log_err.front()) / (log_n.back() - log_n.front());
  CHECK(slope == doctest::Approx(0.5).epsilon(0.3));  // 0.5 +/- 0.15
}

TEST_CASE("deterministic path shortfall matches the compounded misspecification integral") {
  const Setup su;
  const auto grid = TimeGrid::dyadic(1.0, 10);
  std::vector<double> v;
  for (std::size_t k = 0; k < grid.size(); ++k)
    v.push_back(su.S0 * std::exp(su.r * grid[k]));  // zero realized volatility
  const SampledPath path(grid, v, 1);
  const auto led = discrete_delta_hedge(su.sol, path, grid, su.r);

  // realized bracket of the deterministic path vanishes at the O(h) rate
  std::vector<double> logs;
  for (std::size_t k = 0; k < grid.size(); ++k) logs.push_back(std::log(path.at(k, 0)));
  const auto rb = realized_bracket(SampledPath::scalar(grid, logs), TimeGrid::uniform(1.0, 1));
  CHECK(rb.value(0, 1) <= 2.0 * grid.mesh());

  // self-financed shortfall compounds each cell's gain at the bond rate
  const auto gp_model = diffusion_enhance(path, LocalVolSpec::black_scholes(su.sigma), su.r,
                                          PriceCoordinates::Undiscounted);
  double compounded = 0.0;
  DeltaHedgeOptions opt;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double t = grid[k];
    const double gam = su.sol.greeks(std::min(t, 1.0 - 3.0 / 1024.0), path.at(k, 0)).gamma;
    compounded += std::exp(su.r * (su.T - grid[k + 1])) * 0.5 * gam *
                  gp_model.bracket().value(k, k + 1);
  }
  CHECK(led.terminal_shortfall == doctest::Approx(compounded).epsilon(2e-2));

  // plain FTDT prediction agrees with the flat-rate version of the same sum
  const auto ftdt = ftdt_pnl(su.sol, gp_model /*true bracket = model here*/,
                             gp_model.bracket(), su.r);
  CHECK(ftdt.pnl_young == 0.0);
}

TEST_CASE("financing bound holds across seeds and the mesh term shrinks") {
  const Setup su;
  const auto model_vol = LocalVolSpec::black_scholes(su.sigma);
  const double p = 2.5, q = 10.0 / 3.0;
  for (std::size_t i = 0; i < 10; ++i) {
    // one fine path, refined rebalance partitions: the path-level constants
    // are shared and only osc(omega, |pi|) moves
    const auto fine = gbm(TimeGrid::dyadic(1.0, 8), su.S0, su.mu, su.sigma, stream_seed(40, i));
    double prev_mesh = 1e300;
    for (int lv : {5, 6, 7}) {
      const auto grid = TimeGrid::dyadic(1.0, lv);
      const auto fb = financing_bound(su.sol, fine, grid, su.r, p, q, model_vol);
      CHECK(fb.holds);
      CHECK(fb.observed <= fb.bound + 1e-9 * (1.0 + fb.bound));
      CHECK(fb.mesh_term < prev_mesh);
      prev_mesh = fb.mesh_term;
    }
  }
}

TEST_CASE("financing bound rejects an empty exponent window") {
  const Setup su;
  const auto grid = TimeGrid::dyadic(1.0, 5);
  const auto path = gbm(grid, su.S0, su.mu, su.sigma, 4);
  CHECK_THROWS(financing_bound(su.sol, path, grid, su.r, 2.5, 8.0,
                               LocalVolSpec::black_scholes(su.sigma)));
}

TEST_CASE("constant payoff financing bound reduces to the initial value") {
  SchemeParams sp;
  sp.space_cells = 100;
  sp.time_steps = 100;
  sp.center_spot = 100.0;
  const auto sol =
      solve_pde(PayoffSpec::constant(5.0), LocalVolSpec::black_scholes(0.2), 0.05, 1.0, sp);
  const auto grid = TimeGrid::dyadic(1.0, 5);
  const auto path = gbm(grid, 100.0, 0.05, 0.2, 6);
  const auto fb = financing_bound(sol, path, grid, 0.05, 2.5, 10.0 / 3.0,
                                  LocalVolSpec::black_scholes(0.2));
  // Delta and Gamma vanish: every term except |V_0| is numerically zero
  CHECK(fb.observed == doctest::Approx(fb.v0_term).epsilon(1e-8));
  CHECK(fb.mesh_term + fb.compensation_term + fb.terminal_jump_term <
        1e-8 * (1.0 + fb.v0_term));
  CHECK(fb.holds);
}

TEST_CASE("robust bound reduces to the plain bound when brackets agree and always holds") {
  const Setup su;
  const auto model_vol = LocalVolSpec::black_scholes(su.sigma);
  const double p = 2.5, q = 10.0 / 3.0;
  const auto grid = TimeGrid::dyadic(1.0, 6);
  for (std::size_t i = 0; i < 20; ++i) {
    const auto path = gbm(grid, su.S0, su.mu, 0.3 /* true vol */, stream_seed(50, i));
    std::vector<double> xv(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
      xv[k] = std::exp(-su.r * grid[k]) * path.at(k, 0);
    const SampledPath x(grid, xv, 1);
    const auto true_ep = diffusion_enhance(x, LocalVolSpec::black_scholes(0.3), su.r,
                                           PriceCoordinates::Discounted);
    const auto rb = robust_financing_bound(su.sol, true_ep, model_vol, grid, su.r, p, q);
    CHECK(rb.holds);
    CHECK(rb.misspecification_term > 0.0);

    // with the model bracket instead, the misspecification term vanishes
    const auto same = diffusion_enhance(x, model_vol, su.r, PriceCoordinates::Discounted);
    const auto rb0 = robust_financing_bound(su.sol, same, model_vol, grid, su.r, p, q);
    CHECK(rb0.misspecification_term == doctest::Approx(0.0).epsilon(1e-12));
    const auto fb = financing_bound(su.sol, path, grid, su.r, p, q, model_vol);
    CHECK(rb0.bound == doctest::Approx(fb.bound).epsilon(1e-9));
  }
}

TEST_CASE("misspecification term is exactly proportional to the constant-vol gap") {
  const Setup su;
  const auto grid = TimeGrid::dyadic(1.0, 4);
  // flat discounted trace: constant-a brackets have linear-in-time increments,
  // whose p/2-variation norm over [0,T] is attained at the coarsest partition
  std::vector<double> xv(grid.size(), 100.0);
  const SampledPath x(grid, xv, 1);
  const auto model_vol = LocalVolSpec::constant(0.04 * 100.0 * 100.0);
  auto run = [&](double a_true) {
    const auto true_ep = diffusion_enhance(x, LocalVolSpec::constant(a_true * 100.0 * 100.0),
                                           su.r, PriceCoordinates::Discounted);
    return robust_financing_bound(su.sol, true_ep, model_vol, grid, su.r, 2.5, 10.0 / 3.0);
  };
  const auto big = run(0.09);    // gap variation 0.05 * 100^2 * T
  const auto small = run(0.0625);  // gap variation 0.0225 * 100^2 * T
  CHECK(big.misspecification_term > 0.0);
  CHECK(big.misspecification_term / small.misspecification_term ==
        doctest::Approx(0.05 / 0.0225).epsilon(1e-9));
}

TEST_CASE("pathwise value path reproduces the option value in the self-consistent case") {
  const Setup su;
  std::vector<double> errs;
  for (int lv : {6, 8, 10}) {
    const auto grid = TimeGrid::dyadic(1.0, lv);
    const auto path = gbm(grid, su.S0, su.mu, su.sigma, 21);
    const auto ep = diffusion_enhance(path, LocalVolSpec::black_scholes(su.sigma), su.r,
                                      PriceCoordinates::Undiscounted);
    const auto V = pathwise_value_path(su.sol, ep, su.r);
    double worst = 0.0;
    const std::size_t buffer = 2;
    for (std::size_t k = 0; k + buffer < grid.size(); ++k)
      worst = std::max(worst, std::fabs(V.at(k, 0) - su.sol.v(grid[k], path.at(k, 0))));
    errs.push_back(worst);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
  const auto cf = black_scholes_closed_form(su.S0, su.K, su.r, su.sigma, su.T, true);
  CHECK(errs.back() / cf.price < 1e-2);
}

TEST_CASE("pathwise value path with r = 0 is the bare compensated integral") {
  const Setup su;
  SchemeParams sp;
  sp.space_cells = 200;
  sp.time_steps = 200;
  sp.center_spot = 100.0;
  const auto sol =
      solve_pde(PayoffSpec::call(100.0), LocalVolSpec::black_scholes(0.2), 0.0, 1.0, sp);
  const auto grid = TimeGrid::dyadic(1.0, 7);
  const auto path = gbm(grid, 100.0, 0.0, 0.2, 23);
  const auto ep =
      diffusion_enhance(path, LocalVolSpec::black_scholes(0.2), 0.0, PriceCoordinates::Undiscounted);
  const auto V = pathwise_value_path(sol, ep, 0.0);
  // forward-iterate the compensated sum by hand
  double acc = sol.v(0.0, 100.0);
  DeltaHedgeOptions opt;
  const std::size_t frozen = grid.size() - 1 - opt.expiry_buffer_steps;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const std::size_t e = std::min(k, frozen);
    const auto g = sol.greeks(grid[e], path.at(e, 0));
    acc += g.delta * (path.at(k + 1, 0) - path.at(k, 0)) +
           g.gamma * ep.second_order(k, k + 1)[0];
    CHECK(V.at(k + 1, 0) == doctest::Approx(acc).epsilon(1e-12));
  }
}

TEST_CASE("constant payoff value path discounts exactly") {
  SchemeParams sp;
  sp.space_cells = 100;
  sp.time_steps = 100;
  sp.center_spot = 100.0;
  const auto sol =
      solve_pde(PayoffSpec::constant(4.0), LocalVolSpec::black_scholes(0.2), 0.05, 1.0, sp);
  const auto grid = TimeGrid::dyadic(1.0, 6);
  const auto path = gbm(grid, 100.0, 0.05, 0.2, 29);
  const auto ep =
      diffusion_enhance(path, LocalVolSpec::black_scholes(0.2), 0.05, PriceCoordinates::Undiscounted);
  const auto V = pathwise_value_path(sol, ep, 0.05);
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(V.at(k, 0) ==
          doctest::Approx(4.0 * std::exp(-0.05 * (1.0 - grid[k]))).epsilon(1e-6));
}

TEST_CASE("ftdt pnl: zero when model equals truth, antisymmetric, signed for convex payoffs") {
  const Setup su(0.3);  // model vol 0.3
  const auto grid = TimeGrid::dyadic(1.0, 9);
  const auto model_vol = LocalVolSpec::black_scholes(0.3);
  const auto true_vol = LocalVolSpec::black_scholes(0.2);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto path = gbm(grid, su.S0, su.mu, 0.2, stream_seed(60, i));
    const auto true_ep = diffusion_enhance(path, true_vol, su.r, PriceCoordinates::Undiscounted);
    const auto model_ep = diffusion_enhance(path, model_vol, su.r, PriceCoordinates::Undiscounted);

    const auto zero = ftdt_pnl(su.sol, model_ep, model_ep.bracket(), su.r);
    CHECK(zero.pnl_young == 0.0);

    const auto pnl = ftdt_pnl(su.sol, true_ep, model_ep.bracket(), su.r);
    CHECK(pnl.pnl_young >= 0.0);  // Gamma >= 0 and positive bracket gap

    // swapping model and true negates the Young integral
    const auto swapped = ftdt_pnl(su.sol, model_ep, true_ep.bracket(), su.r);
    CHECK(pnl.pnl_young == doctest::Approx(-swapped.pnl_young).epsilon(1e-10));
  }
}

TEST_CASE("ftdt young pnl equals the direct replication shortfall") {
  const Setup su(0.3);
  const auto grid = TimeGrid::dyadic(1.0, 10);
  const auto model_vol = LocalVolSpec::black_scholes(0.3);
  const auto true_vol = LocalVolSpec::black_scholes(0.2);
  const auto cf = black_scholes_closed_form(su.S0, su.K, su.r, 0.3, su.T, true);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto path = gbm(grid, su.S0, su.mu, 0.2, stream_seed(61, i));
    const auto true_ep = diffusion_enhance(path, true_vol, su.r, PriceCoordinates::Undiscounted);
    const auto model_ep = diffusion_enhance(path, model_vol, su.r, PriceCoordinates::Undiscounted);
    const auto pnl = ftdt_pnl(su.sol, true_ep, model_ep.bracket(), su.r);
    const auto V = pathwise_value_path(su.sol, true_ep, su.r, FinancingLeg::ModelCash);
    const double direct = V.at(grid.size() - 1, 0) - su.sol.payoff(path.at(grid.size() - 1, 0));
    CHECK(std::fabs(pnl.pnl_young - direct) < 1e-3 * cf.price);

    // classical time-integral form agrees with the Young form for diffusive brackets
    const double classical = ftdt_classical_form(su.sol, path, model_vol, true_vol, su.r);
    CHECK(std::fabs(pnl.pnl_young - classical) < 2e-3 * cf.price);
  }
}

TEST_CASE("enlarged hedging with zero quotes is plain replication") {
  const Setup su;
  const auto grid = TimeGrid::dyadic(1.0, 7);
  const auto path = gbm(grid, su.S0, su.mu, su.sigma, 71);
  const auto ep = diffusion_enhance(path, LocalVolSpec::black_scholes(su.sigma), su.r,
                                    PriceCoordinates::Undiscounted);
  const auto led = enlarged_hedge(su.sol, path, ep, SwapQuote::zero(grid), su.r);
  CHECK(led.enlarged_pnl == doctest::Approx(0.0).epsilon(1e-12));
  for (double y : led.swap_cost_path) CHECK(y == 0.0);
  // the cash rule reproduces the option value: initial portfolio worth v(0,S0)
  CHECK(led.initial_value ==
        doctest::Approx(su.sol.v(0.0, su.S0)).epsilon(1e-12));
}

TEST_CASE("enlarged rebalancing costs vanish under refinement") {
  const Setup su;
  double prev = 1e300;
  for (int lv : {5, 6, 7, 8}) {
    const auto grid = TimeGrid::dyadic(1.0, lv);
    const auto path = gbm(grid, su.S0, su.mu, su.sigma, 81);
    const auto ep = diffusion_enhance(path, LocalVolSpec::black_scholes(su.sigma), su.r,
                                      PriceCoordinates::Undiscounted);
    const auto led =
        enlarged_hedge(su.sol, path, ep, SwapQuote::proportional(grid, 0.01), su.r);
    CHECK(led.sum_abs_rebalance < prev);
    prev = led.sum_abs_rebalance;
  }
}

TEST_CASE("enlarged pnl equals the closed expression in the swap cost") {
  const Setup su;
  const auto grid = TimeGrid::dyadic(1.0, 8);
  const auto path = gbm(grid, su.S0, su.mu, su.sigma, 91);
  const auto ep = diffusion_enhance(path, LocalVolSpec::black_scholes(su.sigma), su.r,
                                    PriceCoordinates::Undiscounted);
  const auto led = enlarged_hedge(su.sol, path, ep, SwapQuote::proportional(grid, 0.01), su.r);
  const auto& Y = led.swap_cost_path;
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double a = std::exp(su.r * (su.T - grid[k])) * Y[k];
    const double b = std::exp(su.r * (su.T - grid[k + 1])) * Y[k + 1];
    integral += 0.5 * (a + b) * (grid[k + 1] - grid[k]);
  }
  const double closed = Y.back() + su.r * integral;
  CHECK(led.enlarged_pnl == doctest::Approx(closed).epsilon(1e-6));
}

TEST_CASE("enlarged hedging with a custom cash path") {
  const Setup su;
  const auto grid = TimeGrid::dyadic(1.0, 6);
  const auto path = gbm(grid, su.S0, su.mu, su.sigma, 101);
  const auto ep = diffusion_enhance(path, LocalVolSpec::black_scholes(su.sigma), su.r,
                                    PriceCoordinates::Undiscounted);
  // custom rule fed with the zero-rebalancing cash of the zero-quote case
  EnlargedOptions opt;
  opt.rule = EnlargedCashRule::Custom;
  for (std::size_t k = 0; k < grid.size(); ++k)
    opt.custom_cash.push_back(k + 1 == grid.size() ? su.sol.payoff(path.at(k, 0))
                                                   : su.sol.v(grid[k], path.at(k, 0)));
  const auto led = enlarged_hedge(su.sol, path, ep, SwapQuote::zero(grid), su.r, opt);
  const auto led0 = enlarged_hedge(su.sol, path, ep, SwapQuote::zero(grid), su.r);
  CHECK(led.enlarged_pnl == doctest::Approx(led0.enlarged_pnl).epsilon(1e-12));
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(led.nodes[k].cash_units == doctest::Approx(led0.nodes[k].cash_units).epsilon(1e-12));
  EnlargedOptions bad;
  bad.rule = EnlargedCashRule::Custom;
  bad.custom_cash = {1.0};
  CHECK_THROWS(enlarged_hedge(su.sol, path, ep, SwapQuote::zero(grid), su.r, bad));
}
