#include "pathbs/hedging.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "pathbs/pvar.hpp"

namespace pathbs {

namespace {

// Greeks along an undiscounted path, frozen over the final buffer intervals.
struct GreekPaths {
  std::vector<double> delta;    // d v / d z
  std::vector<double> gamma_z;  // d^2 v / d z^2
  std::size_t frozen_from = 0;
};

GreekPaths greeks_along(const PdeSolution& sol, const SampledPath& path,
                        const DeltaHedgeOptions& opt) {
  const auto& g = path.grid();
  const std::size_t n = g.size();
  const std::size_t buffer = std::min<std::size_t>(opt.expiry_buffer_steps, n - 1);
  GreekPaths out;
  out.delta.resize(n);
  out.gamma_z.resize(n);
  out.frozen_from = n - 1 - buffer;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t e = std::min(k, out.frozen_from);
    if (k <= out.frozen_from) {
      const double te = std::min(g[e], sol.horizon() * (1.0 - 1e-12));
      const auto gk = sol.greeks(te, path.at(e, 0));
      out.delta[k] = gk.delta;
      out.gamma_z[k] = gk.gamma;
    } else {
      out.delta[k] = out.delta[out.frozen_from];
      out.gamma_z[k] = out.gamma_z[out.frozen_from];
    }
  }
  return out;
}

SampledPath discounted_trace(const SampledPath& path, double r) {
  std::vector<double> vals(path.size());
  for (std::size_t k = 0; k < path.size(); ++k)
    vals[k] = std::exp(-r * path.grid()[k]) * path.at(k, 0);
  return SampledPath::scalar(path.grid(), std::move(vals));
}

double pvar_norm(const TwoParamField& field, double p) {
  const std::size_t n = field.grid().size();
  const auto mode = n <= 1025 ? PVarMode::Exact : PVarMode::DyadicLowerBound;
  return p_variation(field, p, mode, 1025).norm;
}

}  // namespace

void HedgeLedger::write_csv(const std::string& filename) const {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("HedgeLedger::write_csv: cannot open " + filename);
  out << "node,t,S,cash_units,stock_units,swap_units,value,rebal,cost_pre,cost_post,self_financed\n";
  char buf[320];
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& nd = nodes[k];
    std::snprintf(buf, sizeof(buf),
                  "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k, nd.t,
                  nd.stock_price, nd.cash_units, nd.stock_units, nd.swap_units, nd.value,
                  nd.rebalance_cost, nd.financing_cost_pre, nd.financing_cost_post,
                  nd.self_financed_value);
    out << buf;
  }
}

SwapQuote::SwapQuote(TwoParamField quotes) : quotes_(std::move(quotes)) {
  if (quotes_.shape() != FieldShape::Matrix)
    throw std::invalid_argument("SwapQuote: quotes must be a matrix field");
  const std::size_t n = quotes_.grid().size();
  const std::size_t d = quotes_.dimension();
  quotes_.check_finite();
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = quotes_.at(i, i);
    for (std::size_t c = 0; c < d * d; ++c)
      if (e[c] != 0.0) throw std::invalid_argument("SwapQuote: nonzero diagonal");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const auto e = quotes_.at(i, j);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b)
          if (std::fabs(e[a * d + b] - e[b * d + a]) > 1e-12 * (1.0 + std::fabs(e[a * d + b])))
            throw std::invalid_argument("SwapQuote: quotes not symmetric");
    }
}

SwapQuote SwapQuote::zero(const TimeGrid& grid, std::size_t dimension) {
  return SwapQuote(TwoParamField(grid, FieldShape::Matrix, dimension));
}

SwapQuote SwapQuote::proportional(const TimeGrid& grid, double kappa, std::size_t dimension) {
  TwoParamField q(grid, FieldShape::Matrix, dimension);
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      auto e = q.at(i, j);
      for (std::size_t a = 0; a < dimension; ++a)
        e[a * dimension + a] = kappa * (grid[j] - grid[i]);
    }
  return SwapQuote(std::move(q));
}

HedgeLedger discrete_delta_hedge(const PdeSolution& sol, const SampledPath& path,
                                 const TimeGrid& rebalance_grid, double r,
                                 const DeltaHedgeOptions& opt) {
  if (path.dimension() != 1)
    throw std::invalid_argument("discrete_delta_hedge: one-dimensional paths only");
  if (!path.grid().refines(rebalance_grid))
    throw std::invalid_argument("discrete_delta_hedge: rebalance grid not nested in path grid");

  // restrict the price path to the rebalance nodes
  std::vector<double> sv;
  for (std::size_t k = 0; k < rebalance_grid.size(); ++k)
    sv.push_back(path.at(path.grid().index_of(rebalance_grid[k]), 0));
  SampledPath S(rebalance_grid, sv, 1);
  for (std::size_t k = 0; k < S.size(); ++k)
    if (!sol.inside(rebalance_grid[k], S.at(k, 0)))
      throw std::domain_error("discrete_delta_hedge: path exits the PDE domain");

  const auto gp = greeks_along(sol, S, opt);
  const std::size_t m = rebalance_grid.size();
  HedgeLedger led;
  led.grid = rebalance_grid;
  led.nodes.resize(m);

  auto bond = [&](double t) { return std::exp(r * t); };
  auto disc_value = [&](std::size_t k) {
    const double t = rebalance_grid[k];
    return sol.w(t, std::exp(-r * t) * S.at(k, 0));
  };

  double gains = 0.0;
  double sf_cash = 0.0;  // self-financed bond units
  for (std::size_t k = 0; k < m; ++k) {
    auto& nd = led.nodes[k];
    nd.t = rebalance_grid[k];
    nd.stock_price = S.at(k, 0);
    const double s0 = bond(nd.t);
    if (k == 0) {
      nd.stock_units = gp.delta[0];
      nd.cash_units = disc_value(0) - nd.stock_units * nd.stock_price;  // S~_0 = S_0
      nd.value = nd.cash_units + nd.stock_units * nd.stock_price;
      nd.financing_cost_pre = nd.value;
      nd.financing_cost_post = nd.value;
      nd.self_financed_value = nd.value;
      led.initial_value = nd.value;
      sf_cash = nd.cash_units;
      continue;
    }
    const auto& prev = led.nodes[k - 1];
    const double s0_prev = bond(prev.t);
    const double pre_value = prev.cash_units * s0 + prev.stock_units * nd.stock_price;
    gains += prev.cash_units * (s0 - s0_prev) + prev.stock_units * (nd.stock_price - prev.stock_price);
    nd.financing_cost_pre = pre_value - gains;

    const double sf_value = sf_cash * s0 + prev.stock_units * nd.stock_price;

    const bool settle = k + 1 == m;
    if (!settle && k <= gp.frozen_from) {
      nd.stock_units = gp.delta[k];
      nd.cash_units = disc_value(k) - nd.stock_units * std::exp(-r * nd.t) * nd.stock_price;
    } else {
      nd.stock_units = prev.stock_units;
      nd.cash_units = prev.cash_units;
    }
    nd.value = nd.cash_units * s0 + nd.stock_units * nd.stock_price;
    nd.rebalance_cost = nd.value - pre_value;
    nd.financing_cost_post = nd.value - gains;
    led.sum_abs_rebalance += std::fabs(nd.rebalance_cost);

    nd.self_financed_value = sf_value;
    sf_cash = (sf_value - nd.stock_units * nd.stock_price) / s0;
  }

  led.payoff = sol.payoff(S.at(m - 1, 0));
  // settlement marks the book at the payoff
  led.nodes.back().financing_cost_post = led.payoff - gains;
  led.terminal_shortfall = led.nodes.back().self_financed_value - led.payoff;
  return led;
}

namespace {

struct BoundInputs {
  SampledPath x;        // discounted trace on the path's own grid
  SampledPath h;        // grad_x w along the path
  SampledPath h_prime;  // grad2_xx w along the path
  TwoParamField second_order;  // discounted second-order process, fine grid
  double gamma = 0.0;
  ControlField omega = ControlField::length(TimeGrid::uniform(1.0, 1));
};

// Path-level quantities of the corollary: the controls, their total and the
// constant K belong to the path itself; the partition only enters through
// osc(omega, |pi|) and the per-cell sums of the ledger.
BoundInputs build_bound_inputs(const PdeSolution& sol, const SampledPath& undiscounted,
                               double r, double p, double q,
                               const TwoParamField& bracket_discounted,
                               const DeltaHedgeOptions& opt) {
  const auto& grid = undiscounted.grid();
  const auto gp = greeks_along(sol, undiscounted, opt);
  const std::size_t n = grid.size();
  std::vector<double> xv(n), hv(n), hpv(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid[k];
    xv[k] = std::exp(-r * t) * undiscounted.at(k, 0);
    hv[k] = gp.delta[k];                       // grad_x w = delta_z v
    hpv[k] = std::exp(r * t) * gp.gamma_z[k];  // grad2_xx w = e^{rt} gamma_z
  }
  BoundInputs in{SampledPath(grid, xv, 1),
                 SampledPath(grid, hv, 1),
                 SampledPath(grid, hpv, 1),
                 TwoParamField(grid, FieldShape::Scalar),
                 0.0};

  // discounted second-order process 2 XX = X (x) X - [X]
  TwoParamField xx(grid, FieldShape::Scalar);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double inc = in.x.at(j, 0) - in.x.at(i, 0);
      xx.value(i, j) = 0.5 * (inc * inc - bracket_discounted.value(i, j));
    }
  in.second_order = std::move(xx);

  const double gamma = 2.0 / p + 1.0 / q;
  in.gamma = gamma;

  ControlledPath cp(in.h, in.h_prime, in.x, p, q, 1e-9);
  const auto rem = cp.remainder_field();
  const ControlField wR = cell_sum_control(rem, cp.pstar());
  const ControlField wX = cell_sum_control(increments_field(in.x), p);
  const ControlField wHp = cell_sum_control(increments_field(in.h_prime), q);
  const ControlField wXX = cell_sum_control(in.second_order, 0.5 * p);
  TwoParamField w(grid, FieldShape::Scalar);
  const double e1 = 1.0 - 1.0 / (gamma * p), e2 = 1.0 / (gamma * p);
  const double e3 = 1.0 / (gamma * q), e4 = 2.0 / (gamma * p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      w.value(i, j) = std::pow(wR(i, j), e1) * std::pow(wX(i, j), e2) +
                      std::pow(wHp(i, j), e3) * std::pow(wXX(i, j), e4);
  in.omega = ControlField::trusted(std::move(w));
  return in;
}

FinancingBound assemble_bound(const PdeSolution& sol, const SampledPath& undiscounted,
                              const TimeGrid& rebalance_grid, double r, double p, double q,
                              const BoundInputs& in, double misspec_term,
                              const DeltaHedgeOptions& opt) {
  const double alpha_window_lo = 1.0 - 2.0 / p;
  if (!(1.0 / q > alpha_window_lo))
    throw std::invalid_argument("financing_bound: empty exponent window (need 1/q > 1 - 2/p)");
  const double gamma = in.gamma;
  const auto& fine = undiscounted.grid();
  const double T = fine.horizon();
  const std::size_t nf = fine.size();

  FinancingBound out;
  const auto ledger = discrete_delta_hedge(sol, undiscounted, rebalance_grid, r, opt);
  out.observed = std::fabs(ledger.nodes.back().financing_cost_post);
  out.v0_term = std::fabs(ledger.initial_value);

  // terminal jump and compensation sum live on the rebalance partition
  const std::size_t m = rebalance_grid.size();
  std::vector<std::size_t> at(m);
  for (std::size_t k = 0; k < m; ++k) at[k] = fine.index_of(rebalance_grid[k]);
  const double w_last =
      std::exp(-r * T) * sol.payoff(undiscounted.at(nf - 1, 0));
  const double w_prev = sol.w(rebalance_grid[m - 2], in.x.at(at[m - 2], 0));
  out.terminal_jump_term = std::exp(r * T) * std::fabs(w_last - w_prev);

  double comp = 0.0;
  for (std::size_t k = 0; k + 2 < m; ++k)
    comp += std::exp(r * rebalance_grid[k + 1]) * in.h_prime.at(at[k], 0) *
            in.second_order.value(at[k], at[k + 1]);
  out.compensation_term = std::fabs(comp);

  const double sewing_const = 1.0 / (1.0 - std::pow(2.0, 1.0 - gamma));
  const double pstar = p * q / (p + q);
  ControlledPath cp(in.h, in.h_prime, in.x, p, q, 1e-9);
  const double omega_R_total = cell_sum_control(cp.remainder_field(), pstar)(0, nf - 1);
  const double x_pvar = pvar_norm(increments_field(in.x), p);
  const double hp_qvar = pvar_norm(increments_field(in.h_prime), q);
  const double xx_pvar = pvar_norm(in.second_order, 0.5 * p);
  out.K = sewing_const *
          (std::pow(omega_R_total, 1.0 / p + 1.0 / q) * x_pvar + hp_qvar * xx_pvar);
  out.osc_value = control_osc(in.omega, rebalance_grid.mesh());
  out.mesh_term = std::exp(r * T) * out.K * in.omega(0, nf - 1) *
                  std::pow(out.osc_value, gamma - 1.0);

  out.misspecification_term = misspec_term;
  out.bound = out.v0_term + out.mesh_term + out.compensation_term + out.terminal_jump_term +
              out.misspecification_term;
  out.holds = out.observed <= out.bound + 1e-9 * (1.0 + std::fabs(out.bound));
  return out;
}

}  // namespace

FinancingBound financing_bound(const PdeSolution& sol, const SampledPath& path,
                               const TimeGrid& grid, double r, double p, double q,
                               const LocalVolSpec& model_vol, const DeltaHedgeOptions& opt) {
  if (!path.grid().refines(grid))
    throw std::invalid_argument("financing_bound: rebalance grid not nested in path grid");
  const SampledPath x = discounted_trace(path, r);
  const EnhancedPath model = diffusion_enhance(x, model_vol, r, PriceCoordinates::Discounted);
  const auto in = build_bound_inputs(sol, path, r, p, q, model.bracket(), opt);
  return assemble_bound(sol, path, grid, r, p, q, in, 0.0, opt);
}

FinancingBound robust_financing_bound(const PdeSolution& sol, const EnhancedPath& true_discounted,
                                      const LocalVolSpec& model_vol, const TimeGrid& grid,
                                      double r, double p, double q,
                                      const DeltaHedgeOptions& opt) {
  if (true_discounted.dimension() != 1)
    throw std::invalid_argument("robust_financing_bound: one-dimensional only");
  const auto& fine = true_discounted.grid();
  if (!fine.refines(grid))
    throw std::invalid_argument("robust_financing_bound: rebalance grid not nested");

  // undiscounted price path for the ledger
  std::vector<double> sv(fine.size());
  for (std::size_t k = 0; k < fine.size(); ++k)
    sv[k] = std::exp(r * fine[k]) * true_discounted.trace().at(k, 0);
  SampledPath undiscounted(fine, sv, 1);

  const auto in =
      build_bound_inputs(sol, undiscounted, r, p, q, true_discounted.bracket(), opt);

  // misspecification term: K_H' times the p/2-variation of the bracket gap
  const EnhancedPath model =
      diffusion_enhance(true_discounted.trace(), model_vol, r, PriceCoordinates::Discounted);
  const std::size_t n = fine.size();
  TwoParamField gap(fine, FieldShape::Scalar);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      gap.value(i, j) =
          true_discounted.bracket().value(i, j) - model.bracket().value(i, j);
  const double gap_var = pvar_norm(gap, 0.5 * p);

  double hp_inf = 0.0;
  for (std::size_t k = 0; k < n; ++k) hp_inf = std::max(hp_inf, std::fabs(in.h_prime.at(k, 0)));
  const double hp_qvar = pvar_norm(increments_field(in.h_prime), q);
  const double young_gamma = 4.0 / p + 1.0 / q;
  const double k_hp = std::pow(2.0, (1.0 - 2.0 / p) * (2.0 / p)) *
                      (hp_qvar / (1.0 - std::pow(2.0, 1.0 - young_gamma)) + hp_inf);
  const double misspec = std::exp(r * fine.horizon()) * k_hp * gap_var;

  return assemble_bound(sol, undiscounted, grid, r, p, q, in, misspec, opt);
}

SampledPath pathwise_value_path(const PdeSolution& sol, const EnhancedPath& ep, double r,
                                FinancingLeg leg, const DeltaHedgeOptions& opt) {
  if (ep.dimension() != 1)
    throw std::invalid_argument("pathwise_value_path: one-dimensional only");
  const auto& g = ep.grid();
  const std::size_t n = g.size();
  const auto& S = ep.trace();
  const auto gp = greeks_along(sol, S, opt);

  std::vector<double> out(n, 0.0);
  out[0] = sol.v(0.0, S.at(0, 0));
  double ci_run = 0.0;
  double fin = 0.0;  // running trapezoidal financing integral
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = g[k + 1] - g[k];
    ci_run += gp.delta[k] * (S.at(k + 1, 0) - S.at(k, 0)) +
              gp.gamma_z[k] * ep.second_order(k, k + 1)[0];
    if (leg == FinancingLeg::ModelCash) {
      const double fk = r * (sol.v(g[k], S.at(k, 0)) - gp.delta[k] * S.at(k, 0));
      const double v_next =
          k + 2 == n ? sol.payoff(S.at(k + 1, 0)) : sol.v(g[k + 1], S.at(k + 1, 0));
      const double fk1 = r * (v_next - gp.delta[k + 1] * S.at(k + 1, 0));
      fin += 0.5 * h * (fk + fk1);
      out[k + 1] = out[0] + ci_run + fin;
    } else {
      // implicit trapezoid in V: (1 - r h/2) V_{k+1} = V_0 + CI + F_k
      //   + r h/2 (V_k - Delta_k S_k) - r h/2 Delta_{k+1} S_{k+1}
      const double lhs = 1.0 - 0.5 * r * h;
      if (!(lhs > 0.0)) throw std::runtime_error("pathwise_value_path: step too large");
      const double rhs = out[0] + ci_run + fin + 0.5 * r * h * (out[k] - gp.delta[k] * S.at(k, 0)) -
                         0.5 * r * h * gp.delta[k + 1] * S.at(k + 1, 0);
      out[k + 1] = rhs / lhs;
      fin += 0.5 * r * h *
             ((out[k] - gp.delta[k] * S.at(k, 0)) + (out[k + 1] - gp.delta[k + 1] * S.at(k + 1, 0)));
    }
  }
  return SampledPath::scalar(g, std::move(out));
}

FtdtResult ftdt_pnl(const PdeSolution& sol, const EnhancedPath& true_enhanced,
                    const TwoParamField& model_bracket, double r, const DeltaHedgeOptions& opt) {
  (void)r;
  if (true_enhanced.dimension() != 1)
    throw std::invalid_argument("ftdt_pnl: one-dimensional only");
  if (!(model_bracket.grid() == true_enhanced.grid()))
    throw std::invalid_argument("ftdt_pnl: trace mismatch");
  const auto& g = true_enhanced.grid();
  const std::size_t n = g.size();
  const auto& S = true_enhanced.trace();
  const auto gp = greeks_along(sol, S, opt);

  std::vector<double> run(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double dbr =
        model_bracket.value(k, k + 1) - true_enhanced.bracket().value(k, k + 1);
    run[k + 1] = run[k] + 0.5 * gp.gamma_z[k] * dbr;
  }
  FtdtResult res{run.back(), SampledPath::scalar(g, std::move(run))};
  return res;
}

double ftdt_classical_form(const PdeSolution& sol, const SampledPath& path,
                           const LocalVolSpec& model_vol, const LocalVolSpec& true_vol, double r,
                           const DeltaHedgeOptions& opt) {
  const auto& g = path.grid();
  const std::size_t n = g.size();
  const auto gp = greeks_along(sol, path, opt);
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = g[k];
    const double x = std::exp(-r * t) * path.at(k, 0);
    f[k] = 0.5 * std::exp(2.0 * r * t) * gp.gamma_z[k] * (model_vol(x) - true_vol(x));
  }
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) acc += 0.5 * (f[k] + f[k + 1]) * (g[k + 1] - g[k]);
  return acc;
}

HedgeLedger enlarged_hedge(const PdeSolution& sol, const SampledPath& path, const EnhancedPath& ep,
                           const SwapQuote& quotes, double r, const EnlargedOptions& opt) {
  if (path.dimension() != 1)
    throw std::invalid_argument("enlarged_hedge: one-dimensional only");
  const auto& g = path.grid();
  if (!(ep.grid() == g) || !(quotes.grid() == g))
    throw std::invalid_argument("enlarged_hedge: quote/grid mismatch");
  if (opt.rule == EnlargedCashRule::Custom && opt.custom_cash.size() != g.size())
    throw std::invalid_argument("enlarged_hedge: custom cash path must match the grid");

  const std::size_t n = g.size();
  const auto gp = greeks_along(sol, path, opt.hedge);

  // Y_t = (Gamma.p)_{0,t}: adapted compensated sum against the quotes
  std::vector<double> Y(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k)
    Y[k + 1] = Y[k] + gp.gamma_z[k] * quotes.field().value(k, k + 1);

  // I_t = int_0^t e^{r(t-u)} Y_u du via trapezoid on J = int e^{-ru} Y du
  std::vector<double> C(n, 0.0);
  if (opt.rule == EnlargedCashRule::ZeroRebalancing) {
    double J = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0) {
        const double h = g[k] - g[k - 1];
        J += 0.5 * h *
             (std::exp(-r * g[k - 1]) * Y[k - 1] + std::exp(-r * g[k]) * Y[k]);
      }
      const double value = k + 1 == n ? sol.payoff(path.at(k, 0)) : sol.v(g[k], path.at(k, 0));
      C[k] = value - r * std::exp(r * g[k]) * J;
    }
  } else {
    C = opt.custom_cash;
  }

  HedgeLedger led;
  led.grid = g;
  led.enlarged = true;
  led.nodes.resize(n);
  led.payoff = sol.payoff(path.at(n - 1, 0));
  led.swap_cost_path = Y;

  auto quote_ahead = [&](std::size_t k) {
    return k + 1 < n ? quotes.field().value(k, k + 1) : 0.0;
  };

  for (std::size_t k = 0; k < n; ++k) {
    auto& nd = led.nodes[k];
    nd.t = g[k];
    nd.stock_price = path.at(k, 0);
    const double s0 = std::exp(r * nd.t);
    nd.stock_units = gp.delta[k];
    nd.swap_units = gp.gamma_z[k];
    nd.cash_units = (C[k] - nd.stock_units * nd.stock_price - Y[k]) / s0;
    const double post =
        nd.cash_units * s0 + nd.stock_units * nd.stock_price + nd.swap_units * quote_ahead(k);
    nd.value = post;
    if (k == 0) {
      led.initial_value = post;
      continue;
    }
    const auto& prev = led.nodes[k - 1];
    const double pre = prev.cash_units * s0 + prev.stock_units * nd.stock_price +
                       prev.swap_units * ep.second_order(k - 1, k)[0];
    nd.rebalance_cost = post - pre;
    led.sum_abs_rebalance += std::fabs(nd.rebalance_cost);
  }

  const auto& last = led.nodes.back();
  const double terminal_cash_stock =
      last.cash_units * std::exp(r * g[n - 1]) + last.stock_units * last.stock_price;
  led.enlarged_pnl = led.payoff - terminal_cash_stock;
  led.terminal_shortfall = -led.enlarged_pnl;
  return led;
}

}  // namespace pathbs
