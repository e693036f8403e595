#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pathbs/enhance.hpp"
#include "pathbs/grid.hpp"

namespace pathbs {

/**
 * Vanilla payoff f(S_T). Digital payoffs sit outside the bounded-continuity
 * hypothesis and are only admitted behind allow_discontinuous, which smooths
 * them over one space cell.
 */
class PayoffSpec {
public:
  enum class Kind { Call, Put, Digital, Table };

  static PayoffSpec call(double strike);
  static PayoffSpec put(double strike);
  static PayoffSpec digital(double strike, bool allow_discontinuous = false);
  // Bounded continuous payoff sampled on z-points, linear interpolation.
  static PayoffSpec table(std::vector<double> z, std::vector<double> f);
  static PayoffSpec constant(double value);

  Kind kind() const { return kind_; }
  double strike() const { return strike_; }
  bool discontinuous_allowed() const { return allow_disc_; }
  double operator()(double z) const;  // payoff value f(z)

private:
  Kind kind_ = Kind::Call;
  double strike_ = 0.0;
  bool allow_disc_ = false;
  std::vector<double> tz_, tf_;
};

struct SchemeParams {
  std::size_t space_cells = 400;
  std::size_t time_steps = 400;
  double n_std = 6.0;          // half-width in sigma_ref * sqrt(T) units
  int rannacher_halfsteps = 2; // implicit Euler half-steps before CN
  double center_spot = 0.0;    // 0 = center domain at the strike
  double boundary_buffer = 0.05;
};

/**
 * Numerical solution of the discounted pricing PDE in log space. w(t,x) is
 * the discounted value surface; v(t,z) = e^{rt} w(t, e^{-rt} z). Cubic
 * interpolation in space, linear in time.
 */
class PdeSolution {
public:
  double w(double t, double x) const;  // discounted coordinates
  double v(double t, double z) const;  // undiscounted coordinates

  struct Greeks {
    double delta = 0.0;  // d v / d z
    double gamma = 0.0;  // d^2 v / d z^2
  };
  // Central differences on the space grid with cubic interpolation; throws a
  // flagged extrapolation error in the outer boundary-buffer band.
  Greeks greeks(double t, double z) const;

  double r() const { return r_; }
  double horizon() const { return T_; }
  double payoff(double z) const { return payoff_(z); }
  double rannacher_window() const { return rannacher_window_; }
  // Domain of validity for z at time t, buffer excluded.
  std::pair<double, double> z_domain(double t) const;
  bool inside(double t, double z) const;

  const std::vector<double>& log_space_grid() const { return y_; }
  const std::vector<double>& time_levels() const { return t_; }
  double node(std::size_t m, std::size_t i) const { return w_[m * y_.size() + i]; }

  // Discrete Crank-Nicolson residual of the stored surface, max over the
  // interior nodes of the CN range (excludes Rannacher startup steps).
  double scheme_residual() const;

  void write_surface_csv(const std::string& filename) const;

private:
  friend PdeSolution solve_pde(const PayoffSpec&, const LocalVolSpec&, double, double,
                               const SchemeParams&);
  // w on x = e^y grid: value, dw/dy, d2w/dy2 at (level, node)
  double interp_y(double t, double y, int deriv) const;

  std::vector<double> y_;  // log discounted price nodes, uniform
  std::vector<double> t_;  // time levels, ascending, t_[0]=0, t_.back()=T
  std::vector<double> w_;  // surface, (level m, node i)
  double dy_ = 0.0;
  double r_ = 0.0;
  double T_ = 0.0;
  double rannacher_window_ = 0.0;
  double buffer_ = 0.05;
  std::size_t cn_last_level_ = 0;  // pairs (m-1, m) with m <= this were CN-stepped
  std::vector<double> diffusion_;   // a(e^y)/e^{2y} per node
  std::function<double(double)> payoff_;
};

PdeSolution solve_pde(const PayoffSpec& payoff, const LocalVolSpec& vol, double r, double T,
                      const SchemeParams& params = {});

// Independent closed-form constant-vol oracle (not used by the solver).
struct BlackScholesValue {
  double price = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
};
BlackScholesValue black_scholes_closed_form(double spot, double strike, double r, double sigma,
                                            double tau, bool is_call);

struct QModerationReport {
  double gamma_q_variation = 0.0;      // q-variation of t -> grad2 w(t, X_t)
  bool gamma_qvar_lower_bound = false;
  double grad_time_modulus = 0.0;      // sup_pairs max_x |grad w(t,x)-grad w(s,x)|^{p*}
  double gamma_holder_const = 0.0;     // sup_t alpha-Holder const of grad2 w on conv(trace)
  double p = 0.0, q = 0.0, alpha = 0.0;
  bool window_ok = false;              // 1 - 2/p < 1/q < alpha/p
};

// Joint regularity report for (w, X); path in discounted coordinates. Throws
// when the exponent window is empty.
QModerationReport q_moderation_report(const PdeSolution& sol, const SampledPath& path, double p,
                                      double q, double alpha);

}  // namespace pathbs
