#pragma once

#include <string>

#include "pathbs/enhance.hpp"
#include "pathbs/pde.hpp"
#include "pathbs/sewing.hpp"

namespace pathbs {

/**
 * Per-rebalance record of a discrete hedging run. Positions are caglad: the
 * pair (cash_units, stock) set at node u is held on (u, u']. Two financing
 * aggregates are kept:
 *   cost_pre(t)  - eq-of-definition cost with positions still marked at the
 *                  pre-rebalance values (strict caglad evaluation at t);
 *   cost_post(t) - positions marked after the rebalance at t; at T this is
 *                  f(S_T) minus the accumulated trading gains.
 * The self-financed variant (same stock leg, cash absorbing the hedge error)
 * is carried alongside; its terminal value minus the payoff is the classical
 * discrete-hedging shortfall.
 */
struct HedgeNode {
  double t = 0.0;
  double stock_price = 0.0;
  double cash_units = 0.0;   // bond-units position H^0 set at this node
  double stock_units = 0.0;  // stock position H set at this node
  double swap_units = 0.0;   // enlarged mode only
  double value = 0.0;        // post-rebalance portfolio value
  double rebalance_cost = 0.0;
  double financing_cost_pre = 0.0;
  double financing_cost_post = 0.0;
  double self_financed_value = 0.0;
};

struct HedgeLedger {
  TimeGrid grid = TimeGrid::uniform(1.0, 1);
  std::vector<HedgeNode> nodes;
  double payoff = 0.0;
  double terminal_shortfall = 0.0;  // self-financed value at T minus payoff
  double initial_value = 0.0;
  bool enlarged = false;
  double enlarged_pnl = 0.0;  // payoff minus terminal cash+stock value
  double sum_abs_rebalance = 0.0;
  std::vector<double> swap_cost_path;  // Y_t = (Gamma.p)_{0,t}, enlarged mode

  void write_csv(const std::string& filename) const;
};

/**
 * Swap quote surface p(s,t): the time-s price of the contract paying the
 * second-order increment over (s,t]. Symmetric d x d values, null on the
 * diagonal, declared finite p/2-variation.
 */
class SwapQuote {
public:
  explicit SwapQuote(TwoParamField quotes);
  static SwapQuote zero(const TimeGrid& grid, std::size_t dimension = 1);
  // p(s,t) = kappa (t-s) on the diagonal entries
  static SwapQuote proportional(const TimeGrid& grid, double kappa, std::size_t dimension = 1);

  const TwoParamField& field() const { return quotes_; }
  const TimeGrid& grid() const { return quotes_.grid(); }

private:
  TwoParamField quotes_;
};

// Discretised replicating strategy H = grad_x w(t, S~_t), H^0 = w - H S~ on
// the rebalance grid; cash accrues exactly at r. Greeks are frozen over the
// final expiry_buffer_steps rebalance intervals.
struct DeltaHedgeOptions {
  std::size_t expiry_buffer_steps = 2;
};
HedgeLedger discrete_delta_hedge(const PdeSolution& sol, const SampledPath& path,
                                 const TimeGrid& rebalance_grid, double r,
                                 const DeltaHedgeOptions& options = {});

/**
 * Cost-of-financing bound for the self-consistent diffusive case. `observed`
 * is the ledger's terminal cost_post minus nothing -- |C_T| itself; the bound
 * decomposes into |V_0|, the sewing mesh term, the compensation sum and the
 * terminal jump.
 */
struct FinancingBound {
  double observed = 0.0;
  double bound = 0.0;
  double v0_term = 0.0;
  double mesh_term = 0.0;
  double compensation_term = 0.0;
  double terminal_jump_term = 0.0;
  double misspecification_term = 0.0;  // robust variant only
  double K = 0.0;                      // sewing constant of the bound
  double osc_value = 0.0;
  bool holds = false;
};

FinancingBound financing_bound(const PdeSolution& sol, const SampledPath& path,
                               const TimeGrid& rebalance_grid, double r, double p, double q,
                               const LocalVolSpec& model_vol,
                               const DeltaHedgeOptions& options = {});

// Robust variant: the true enhancer is an arbitrary finite p/2-variation
// bracket above the same trace; adds the Young misspecification term.
FinancingBound robust_financing_bound(const PdeSolution& sol, const EnhancedPath& true_discounted,
                                      const LocalVolSpec& model_vol, const TimeGrid& rebalance_grid,
                                      double r, double p, double q,
                                      const DeltaHedgeOptions& options = {});

enum class FinancingLeg {
  SelfConsistent,  // integrand (V_u - Delta_u S_u); solved implicitly
  ModelCash        // integrand (v(u,S_u) - Delta_u S_u); the P&L convention
};

// Pathwise portfolio value: V_t = V_0 + ((Delta,Gamma).(S,XX))_{0,t}
// + r int_0^t (cash leg) du, solved by forward grid iteration with a
// trapezoidal financing term. `ep` is the undiscounted enhancement driving
// the compensated integral.
SampledPath pathwise_value_path(const PdeSolution& sol, const EnhancedPath& ep, double r,
                                FinancingLeg leg = FinancingLeg::SelfConsistent,
                                const DeltaHedgeOptions& options = {});

struct FtdtResult {
  double pnl_young = 0.0;      // 1/2 (Gamma . ([S] - [S true]))_{0,T}
  SampledPath integrand_path;  // running Young integral (1/2 included)
};

// Fundamental theorem of derivative trading: model bracket vs true bracket
// above the same undiscounted trace.
FtdtResult ftdt_pnl(const PdeSolution& sol, const EnhancedPath& true_enhanced,
                    const TwoParamField& model_bracket, double r,
                    const DeltaHedgeOptions& options = {});

// Classical time-integral form of the P&L for diffusive true enhancers:
// 1/2 int e^{2rt} Gamma_z(t,S_t) (a - a_true)(e^{-rt} S_t) dt by trapezoid.
double ftdt_classical_form(const PdeSolution& sol, const SampledPath& path,
                           const LocalVolSpec& model_vol, const LocalVolSpec& true_vol, double r,
                           const DeltaHedgeOptions& options = {});

enum class EnlargedCashRule { ZeroRebalancing, Custom };

struct EnlargedOptions {
  EnlargedCashRule rule = EnlargedCashRule::ZeroRebalancing;
  std::vector<double> custom_cash;  // per rebalance node when rule == Custom
  DeltaHedgeOptions hedge;
};

// C-enlarged Delta hedging with swap positions Gamma against quotes p;
// Y_t = (Gamma.p)_{0,t} by sewing. The zero-rebalancing rule uses
// C_t = v(t,S_t) - r int_0^t e^{r(t-u)} Y_u du.
HedgeLedger enlarged_hedge(const PdeSolution& sol, const SampledPath& path, const EnhancedPath& ep,
                           const SwapQuote& quotes, double r, const EnlargedOptions& options = {});

}  // namespace pathbs
