#include "pathbs/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "pathbs/pvar.hpp"
#include "pathbs/stats.hpp"

namespace pathbs {

PayoffSpec PayoffSpec::call(double strike) {
  if (!(strike > 0.0)) throw std::invalid_argument("PayoffSpec: strike must be positive");
  PayoffSpec p;
  p.kind_ = Kind::Call;
  p.strike_ = strike;
  return p;
}

PayoffSpec PayoffSpec::put(double strike) {
  if (!(strike > 0.0)) throw std::invalid_argument("PayoffSpec: strike must be positive");
  PayoffSpec p;
  p.kind_ = Kind::Put;
  p.strike_ = strike;
  return p;
}

PayoffSpec PayoffSpec::digital(double strike, bool allow_discontinuous) {
  if (!(strike > 0.0)) throw std::invalid_argument("PayoffSpec: strike must be positive");
  PayoffSpec p;
  p.kind_ = Kind::Digital;
  p.strike_ = strike;
  p.allow_disc_ = allow_discontinuous;
  return p;
}

PayoffSpec PayoffSpec::table(std::vector<double> z, std::vector<double> f) {
  if (z.size() != f.size() || z.size() < 2)
    throw std::invalid_argument("PayoffSpec: table needs >= 2 samples");
  for (std::size_t i = 0; i + 1 < z.size(); ++i)
    if (!(z[i] < z[i + 1])) throw std::invalid_argument("PayoffSpec: table z not increasing");
  for (double v : f)
    if (!std::isfinite(v)) throw std::invalid_argument("PayoffSpec: non-finite table value");
  PayoffSpec p;
  p.kind_ = Kind::Table;
  p.tz_ = std::move(z);
  p.tf_ = std::move(f);
  return p;
}

PayoffSpec PayoffSpec::constant(double value) {
  return table({1e-8, 1e8}, {value, value});
}

double PayoffSpec::operator()(double z) const {
  switch (kind_) {
    case Kind::Call: return std::max(z - strike_, 0.0);
    case Kind::Put: return std::max(strike_ - z, 0.0);
    case Kind::Digital: return z >= strike_ ? 1.0 : 0.0;
    case Kind::Table: {
      if (z <= tz_.front()) return tf_.front();
      if (z >= tz_.back()) return tf_.back();
      const auto it = std::upper_bound(tz_.begin(), tz_.end(), z);
      const std::size_t j = static_cast<std::size_t>(it - tz_.begin());
      const double w = (z - tz_[j - 1]) / (tz_[j] - tz_[j - 1]);
      return (1.0 - w) * tf_[j - 1] + w * tf_[j];
    }
  }
  return 0.0;
}

namespace {

// Thomas algorithm, in place on the rhs.
void solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                       const std::vector<double>& upper, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0);
  double beta = diag[0];
  if (beta == 0.0) throw std::runtime_error("pde: tridiagonal solver failure");
  rhs[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    c[i] = upper[i - 1] / beta;
    beta = diag[i] - lower[i] * c[i];
    if (beta == 0.0) throw std::runtime_error("pde: tridiagonal solver failure");
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i + 1] * rhs[i + 1];
}

}  // namespace

double PdeSolution::interp_y(double t, double y, int deriv) const {
  // derivative evaluation inside the final Rannacher window is one-sided:
  // clamp to the last level before the window
  double t_eval = t;
  if (deriv > 0 && rannacher_window_ > 0.0)
    t_eval = std::min(t_eval, T_ - rannacher_window_);
  const std::size_t M = t_.size();
  std::size_t m1 = std::upper_bound(t_.begin(), t_.end(), t_eval) - t_.begin();
  m1 = std::clamp<std::size_t>(m1, 1, M - 1);
  const std::size_t m0 = m1 - 1;
  const double wt = (t_eval - t_[m0]) / (t_[m1] - t_[m0]);

  const std::size_t N = y_.size();
  auto slice_value = [&](std::size_t m) {
    // local cubic Lagrange on the uniform y grid
    double s = (y - y_[0]) / dy_;
    std::ptrdiff_t i1 = static_cast<std::ptrdiff_t>(std::floor(s));
    i1 = std::clamp<std::ptrdiff_t>(i1, 1, static_cast<std::ptrdiff_t>(N) - 3);
    const double u = s - static_cast<double>(i1);
    const double* wrow = w_.data() + m * N + (i1 - 1);
    const double f0 = wrow[0], f1 = wrow[1], f2 = wrow[2], f3 = wrow[3];
    if (deriv == 0) {
      const double c0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
      const double c1 = (u * u - 1.0) * (u - 2.0) / 2.0;
      const double c2 = -u * (u + 1.0) * (u - 2.0) / 2.0;
      const double c3 = u * (u * u - 1.0) / 6.0;
      return c0 * f0 + c1 * f1 + c2 * f2 + c3 * f3;
    }
    if (deriv == 1) {
      const double c0 = -(3.0 * u * u - 6.0 * u + 2.0) / 6.0;
      const double c1 = (3.0 * u * u - 4.0 * u - 1.0) / 2.0;
      const double c2 = -(3.0 * u * u - 2.0 * u - 2.0) / 2.0;
      const double c3 = (3.0 * u * u - 1.0) / 6.0;
      return (c0 * f0 + c1 * f1 + c2 * f2 + c3 * f3) / dy_;
    }
    const double c0 = -(u - 1.0);
    const double c1 = (3.0 * u - 2.0);
    const double c2 = -(3.0 * u - 1.0);
    const double c3 = u;
    return (c0 * f0 + c1 * f1 + c2 * f2 + c3 * f3) / (dy_ * dy_);
  };
  return (1.0 - wt) * slice_value(m0) + wt * slice_value(m1);
}

double PdeSolution::w(double t, double x) const {
  if (!(x > 0.0)) throw std::invalid_argument("PdeSolution::w: x must be positive");
  return interp_y(t, std::log(x), 0);
}

double PdeSolution::v(double t, double z) const {
  return std::exp(r_ * t) * w(t, std::exp(-r_ * t) * z);
}

std::pair<double, double> PdeSolution::z_domain(double t) const {
  const double pad = buffer_ * (y_.back() - y_.front());
  const double growth = std::exp(r_ * t);
  return {growth * std::exp(y_.front() + pad), growth * std::exp(y_.back() - pad)};
}

bool PdeSolution::inside(double t, double z) const {
  const auto dom = z_domain(t);
  return z >= dom.first && z <= dom.second && t >= 0.0 && t <= T_;
}

PdeSolution::Greeks PdeSolution::greeks(double t, double z) const {
  if (!(t >= 0.0 && t < T_)) throw std::invalid_argument("greeks: need 0 <= t < T");
  if (!inside(t, z))
    throw std::domain_error("greeks: evaluation in boundary buffer (flagged extrapolation)");
  const double x = std::exp(-r_ * t) * z;
  const double y = std::log(x);
  const double wy = interp_y(t, y, 1);
  const double wyy = interp_y(t, y, 2);
  Greeks g;
  // delta_z v = d_x w; gamma_z v = e^{-rt} d2_xx w
  g.delta = std::exp(-y) * wy;
  g.gamma = std::exp(-r_ * t) * std::exp(-2.0 * y) * (wyy - wy);
  return g;
}

double PdeSolution::scheme_residual() const {
  const std::size_t N = y_.size();
  double worst = 0.0;
  for (std::size_t m = 1; m <= cn_last_level_ && m < t_.size(); ++m) {
    const double dt = t_[m] - t_[m - 1];
    for (std::size_t i = 1; i + 1 < N; ++i) {
      auto op = [&](std::size_t lvl) {
        const double wm = w_[lvl * N + i - 1], w0 = w_[lvl * N + i], wp = w_[lvl * N + i + 1];
        const double d2 = (wp - 2.0 * w0 + wm) / (dy_ * dy_);
        const double d1 = (wp - wm) / (2.0 * dy_);
        return 0.5 * diffusion_[i] * (d2 - d1);
      };
      const double dt_term = (w_[m * N + i] - w_[(m - 1) * N + i]) / dt;
      const double res = dt_term + 0.5 * (op(m) + op(m - 1));
      worst = std::max(worst, std::fabs(res));
    }
  }
  return worst;
}

void PdeSolution::write_surface_csv(const std::string& filename) const {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("write_surface_csv: cannot open " + filename);
  out << "t,x,w\n";
  char buf[96];
  for (std::size_t m = 0; m < t_.size(); ++m)
    for (std::size_t i = 0; i < y_.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", t_[m], std::exp(y_[i]),
                    w_[m * y_.size() + i]);
      out << buf;
    }
}

PdeSolution solve_pde(const PayoffSpec& payoff, const LocalVolSpec& vol, double r, double T,
                      const SchemeParams& params) {
  if (!(T > 0.0)) throw std::invalid_argument("solve_pde: T must be positive");
  if (r < 0.0) throw std::invalid_argument("solve_pde: r must be nonnegative");
  if (payoff.kind() == PayoffSpec::Kind::Digital && !payoff.discontinuous_allowed())
    throw std::invalid_argument(
        "solve_pde: discontinuous payoff requires the explicit digital flag");
  if (params.space_cells < 8 || params.time_steps < 4)
    throw std::invalid_argument("solve_pde: grid too small");

  const double anchor_z =
      params.center_spot > 0.0 ? params.center_spot
                               : (payoff.strike() > 0.0 ? payoff.strike() : 100.0);
  const double xK = payoff.strike() > 0.0 ? payoff.strike() * std::exp(-r * T) : anchor_z;
  const double sigma_ref = vol.reference_sigma(anchor_z * std::exp(-r * T));
  const double half_width = params.n_std * sigma_ref * std::sqrt(T);

  const std::size_t N = params.space_cells + 1;
  const double y_center = std::log(anchor_z * std::exp(-r * T));
  double y_lo = y_center - half_width;
  const double dy = 2.0 * half_width / static_cast<double>(params.space_cells);
  // shift so the discounted log-strike is a grid node
  const double yK = std::log(xK);
  const double frac = (yK - y_lo) / dy - std::floor((yK - y_lo) / dy);
  y_lo += frac * dy - (frac > 0.5 ? dy : 0.0);

  PdeSolution sol;
  sol.r_ = r;
  sol.T_ = T;
  sol.buffer_ = params.boundary_buffer;
  sol.dy_ = dy;
  sol.y_.resize(N);
  for (std::size_t i = 0; i < N; ++i) sol.y_[i] = y_lo + dy * static_cast<double>(i);

  sol.diffusion_.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double x = std::exp(sol.y_[i]);
    sol.diffusion_[i] = vol(x) / (x * x);
  }

  // discounted payoff on the x grid, h~(x) = e^{-rT} f(e^{rT} x)
  const double growth = std::exp(r * T);
  std::vector<double> terminal(N);
  for (std::size_t i = 0; i < N; ++i)
    terminal[i] = std::exp(-r * T) * payoff(growth * std::exp(sol.y_[i]));
  if (payoff.kind() == PayoffSpec::Kind::Digital) {
    // one-cell smoothing: replace the indicator by its exact cell average so
    // the jump stays centred on its true location
    const double y_jump = std::log(payoff.strike()) - r * T;
    for (std::size_t i = 0; i < N; ++i) {
      const double frac = std::clamp((sol.y_[i] + 0.5 * dy - y_jump) / dy, 0.0, 1.0);
      terminal[i] = std::exp(-r * T) * frac;
    }
  }

  // time levels: uniform steps, the first `rannacher_halfsteps` half-steps
  // are implicit Euler
  const std::size_t M = params.time_steps;
  const double dt = T / static_cast<double>(M);
  sol.t_.resize(M + 1);
  for (std::size_t m = 0; m <= M; ++m) sol.t_[m] = T * static_cast<double>(m) / static_cast<double>(M);
  sol.t_.back() = T;
  const int rann = std::max(0, params.rannacher_halfsteps);
  sol.w_.assign((M + 1) * N, 0.0);

  // boundary values in discounted coordinates are time-independent
  auto boundary = [&](bool upper) {
    const double x = std::exp(upper ? sol.y_.back() : sol.y_.front());
    switch (payoff.kind()) {
      case PayoffSpec::Kind::Call: return upper ? x - payoff.strike() * std::exp(-r * T) : 0.0;
      case PayoffSpec::Kind::Put: return upper ? 0.0 : payoff.strike() * std::exp(-r * T) - x;
      default: return std::exp(-r * T) * payoff(growth * x);
    }
  };
  const double bc_lo = boundary(false), bc_hi = boundary(true);

  std::vector<double> cur = terminal;  // level M
  for (std::size_t i = 0; i < N; ++i) sol.w_[M * N + i] = cur[i];

  std::vector<double> lower(N - 2), diag(N - 2), upper(N - 2), rhs(N - 2);
  auto apply_operator = [&](const std::vector<double>& w, std::size_t i) {
    const double d2 = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (dy * dy);
    const double d1 = (w[i + 1] - w[i - 1]) / (2.0 * dy);
    return 0.5 * sol.diffusion_[i] * (d2 - d1);
  };
  auto implicit_step = [&](double theta, double step) {
    // (I - theta step A) w_new = w_old + (1-theta) step A w_old
    for (std::size_t i = 1; i + 1 < N; ++i) {
      const double a = 0.5 * sol.diffusion_[i];
      const double lo = theta * step * a * (1.0 / (dy * dy) + 1.0 / (2.0 * dy));
      const double hi = theta * step * a * (1.0 / (dy * dy) - 1.0 / (2.0 * dy));
      const double mid = -theta * step * a * 2.0 / (dy * dy);
      lower[i - 1] = -lo;
      upper[i - 1] = -hi;
      diag[i - 1] = 1.0 - mid;
      rhs[i - 1] = cur[i] + (1.0 - theta) * step * apply_operator(cur, i);
    }
    rhs[0] += theta * step * 0.5 * sol.diffusion_[1] * (1.0 / (dy * dy) + 1.0 / (2.0 * dy)) * bc_lo;
    rhs[N - 3] +=
        theta * step * 0.5 * sol.diffusion_[N - 2] * (1.0 / (dy * dy) - 1.0 / (2.0 * dy)) * bc_hi;
    solve_tridiagonal(lower, diag, upper, rhs);
    for (std::size_t i = 1; i + 1 < N; ++i) cur[i] = rhs[i - 1];
    cur[0] = bc_lo;
    cur[N - 1] = bc_hi;
  };

  // each startup step consumes one dt as two implicit-Euler half-steps
  const std::size_t rann_pairs = static_cast<std::size_t>((rann + 1) / 2);
  std::size_t m = M;
  while (m > 0) {
    if (M - m < rann_pairs) {
      implicit_step(1.0, 0.5 * dt);
      implicit_step(1.0, 0.5 * dt);
    } else {
      implicit_step(0.5, dt);
    }
    --m;
    for (std::size_t i = 0; i < N; ++i) sol.w_[m * N + i] = cur[i];
  }
  sol.cn_last_level_ = M - rann_pairs;
  sol.rannacher_window_ = dt * static_cast<double>(rann_pairs);

  sol.payoff_ = [payoff](double z) { return payoff(z); };
  return sol;
}

BlackScholesValue black_scholes_closed_form(double spot, double strike, double r, double sigma,
                                            double tau, bool is_call) {
  if (!(spot > 0.0) || !(strike > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("black_scholes_closed_form: bad inputs");
  BlackScholesValue out;
  if (tau <= 0.0) {
    out.price = is_call ? std::max(spot - strike, 0.0) : std::max(strike - spot, 0.0);
    out.delta = is_call ? (spot > strike ? 1.0 : 0.0) : (spot < strike ? -1.0 : 0.0);
    return out;
  }
  const double sq = sigma * std::sqrt(tau);
  const double d1 = (std::log(spot / strike) + (r + 0.5 * sigma * sigma) * tau) / sq;
  const double d2 = d1 - sq;
  const double disc = std::exp(-r * tau);
  if (is_call) {
    out.price = spot * normal_cdf(d1) - strike * disc * normal_cdf(d2);
    out.delta = normal_cdf(d1);
  } else {
    out.price = strike * disc * normal_cdf(-d2) - spot * normal_cdf(-d1);
    out.delta = normal_cdf(d1) - 1.0;
  }
  out.gamma = normal_pdf(d1) / (spot * sq);
  return out;
}

QModerationReport q_moderation_report(const PdeSolution& sol, const SampledPath& path, double p,
                                      double q, double alpha) {
  if (path.dimension() != 1)
    throw std::invalid_argument("q_moderation_report: one-dimensional paths only");
  QModerationReport rep;
  rep.p = p;
  rep.q = q;
  rep.alpha = alpha;
  const double lo = 1.0 - 2.0 / p, hi = alpha / p;
  if (!(lo < hi))
    throw std::invalid_argument("q_moderation_report: empty exponent window (1-2/p >= alpha/p)");
  rep.window_ok = lo < 1.0 / q && 1.0 / q < hi;

  const double r = sol.r();
  const auto& g = path.grid();
  const std::size_t n = g.size();
  const double t_max = sol.horizon() - sol.rannacher_window();

  // (i) q-variation of the Gamma path along the trace
  std::vector<double> gamma_path;
  std::vector<double> eval_times;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = std::min(g[k], t_max);
    const double z = std::exp(r * t) * path.at(k, 0);
    gamma_path.push_back(sol.greeks(std::min(t, sol.horizon() * (1.0 - 1e-9)), z).gamma);
    eval_times.push_back(g[k]);
  }
  {
    SampledPath gp(g, gamma_path, 1);
    const auto inc = increments_field(gp);
    const bool small = n <= 18;
    const auto pv =
        p_variation(inc, q, small ? PVarMode::Exact : PVarMode::DyadicLowerBound, 18);
    rep.gamma_q_variation = pv.value;
    rep.gamma_qvar_lower_bound = pv.lower_bound;
  }

  // (ii) time modulus of grad w at trace points, p* power
  const double pstar = p * q / (p + q);
  {
    const std::size_t stride = std::max<std::size_t>(1, n / 64);
    double worst = 0.0;
    for (std::size_t a = 0; a < n; a += stride)
      for (std::size_t b = a + stride; b < n; b += stride) {
        const double ta = std::min(g[a], t_max), tb = std::min(g[b], t_max);
        for (std::size_t k = 0; k < n; k += stride) {
          const double x = path.at(k, 0);
          // grad_x w(t,x) equals delta of v at z = e^{rt} x
          const double da = sol.greeks(ta, std::exp(r * ta) * x).delta;
          const double db = sol.greeks(tb, std::exp(r * tb) * x).delta;
          worst = std::max(worst, std::pow(std::fabs(db - da), pstar));
        }
      }
    rep.grad_time_modulus = worst;
  }

  // (iii) alpha-Holder constant of grad2 w over the convex hull of the trace
  {
    double x_lo = path.at(0, 0), x_hi = path.at(0, 0);
    for (std::size_t k = 0; k < n; ++k) {
      x_lo = std::min(x_lo, path.at(k, 0));
      x_hi = std::max(x_hi, path.at(k, 0));
    }
    const std::size_t probes = 33;
    double worst = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, n / 32);
    for (std::size_t k = 0; k < n; k += stride) {
      const double t = std::min(g[k], t_max);
      std::vector<double> gs(probes);
      std::vector<double> xs(probes);
      for (std::size_t i = 0; i < probes; ++i) {
        xs[i] = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(probes - 1);
        gs[i] = sol.greeks(t, std::exp(r * t) * xs[i]).gamma;
      }
      for (std::size_t i = 0; i < probes; ++i)
        for (std::size_t j = i + 1; j < probes; ++j)
          worst = std::max(worst, std::fabs(gs[j] - gs[i]) / std::pow(xs[j] - xs[i], alpha));
    }
    rep.gamma_holder_const = worst;
  }
  return rep;
}

}  // namespace pathbs
