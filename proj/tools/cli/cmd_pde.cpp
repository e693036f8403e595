#include <cmath>
#include <iostream>
#include <memory>

#include "cli/commands.hpp"
#include "cli/common.hpp"
#include "pathbs/pde.hpp"

namespace pathbs::cli {

namespace {

struct PdeOpts {
  CommonOpts common;
  std::string payoff = "call";
  double strike = 100.0;
  double payoff_value = 1.0;  // constant payoff
  std::string vol_kind = "bs";
  double sigma = 0.2;
  double vol_level = 0.04;
  double cev_beta = 0.8;
  double r = 0.05;
  double horizon = 1.0;
  double spot = 100.0;
  std::size_t space = 400;
  std::size_t time = 400;
  double n_std = 6.0;
  int rannacher = 2;
  std::string surface_csv;
};

LocalVolSpec make_vol(const PdeOpts& o) {
  if (o.vol_kind == "bs") return LocalVolSpec::black_scholes(o.sigma);
  if (o.vol_kind == "constant") return LocalVolSpec::constant(o.vol_level);
  if (o.vol_kind == "cev") return LocalVolSpec::cev(o.sigma, o.cev_beta);
  throw CLI::ValidationError("--vol-kind must be bs|constant|cev");
}

PayoffSpec make_payoff(const PdeOpts& o) {
  if (o.payoff == "call") return PayoffSpec::call(o.strike);
  if (o.payoff == "put") return PayoffSpec::put(o.strike);
  if (o.payoff == "digital") return PayoffSpec::digital(o.strike, true);
  if (o.payoff == "constant") return PayoffSpec::constant(o.payoff_value);
  throw CLI::ValidationError("--payoff must be call|put|digital|constant");
}

void run_pde(const PdeOpts& o) {
  SchemeParams sp;
  sp.space_cells = o.space;
  sp.time_steps = o.time;
  sp.n_std = o.n_std;
  sp.rannacher_halfsteps = o.rannacher;
  sp.center_spot = o.spot;

  const auto payoff = make_payoff(o);
  const auto vol = make_vol(o);
  const auto sol = solve_pde(payoff, vol, o.r, o.horizon, sp);
  const double price = sol.v(0.0, o.spot);
  const auto greeks = sol.greeks(0.0, o.spot);

  RunConfig cfg;
  cfg.set("cmd", "pde");
  cfg.set("payoff", o.payoff);
  cfg.set_num("K", o.strike);
  cfg.set("vol_kind", o.vol_kind);
  cfg.set_num("sigma", o.sigma);
  cfg.set_num("r", o.r);
  cfg.set_num("T", o.horizon);
  cfg.set_num("S0", o.spot);
  cfg.set_int("space", static_cast<long long>(o.space));
  cfg.set_int("time", static_cast<long long>(o.time));
  cfg.set_num("n_std", o.n_std);
  cfg.set_int("rannacher", o.rannacher);
  cfg.set_int("seed", static_cast<long long>(o.common.seed));

  json rep;
  rep["config"] = cfg.to_json();
  rep["config_hash"] = cfg.hash();
  rep["seed"] = o.common.seed;
  rep["price"] = price;
  rep["delta"] = greeks.delta;
  rep["gamma"] = greeks.gamma;
  if (o.vol_kind == "bs" && (o.payoff == "call" || o.payoff == "put")) {
    const auto cf = black_scholes_closed_form(o.spot, o.strike, o.r, o.sigma, o.horizon,
                                              o.payoff == "call");
    rep["closed_form_price"] = cf.price;
    rep["closed_form_delta"] = cf.delta;
    rep["closed_form_gamma"] = cf.gamma;
    rep["price_rel_error"] = std::fabs(price - cf.price) / cf.price;
  }
  if (!o.surface_csv.empty()) {
    const std::string path = out_path(o.common.out_dir, o.surface_csv);
    sol.write_surface_csv(path);
    rep["surface_csv"] = o.surface_csv;
  }
  write_json_file(out_path(o.common.out_dir, "pde_report.json"), rep);
  std::cout << rep.dump(2) << "\n";
}

}  // namespace

void register_pde(CLI::App& app) {
  auto opts = std::make_shared<PdeOpts>();
  CLI::App* sub = app.add_subcommand("pde", "Solve the pricing PDE and report price and greeks");
  add_common(*sub, opts->common);
  sub->add_option("--payoff", opts->payoff, "call|put|digital|constant");
  sub->add_option("--K", opts->strike, "strike");
  sub->add_option("--payoff-value", opts->payoff_value, "constant payoff level");
  sub->add_option("--vol-kind", opts->vol_kind, "bs|constant|cev");
  sub->add_option("--sigma", opts->sigma, "volatility coefficient");
  sub->add_option("--vol-level", opts->vol_level, "constant local variance a(x)");
  sub->add_option("--cev-beta", opts->cev_beta, "CEV exponent");
  sub->add_option("--r", opts->r, "interest rate");
  sub->add_option("--T", opts->horizon, "maturity in years");
  sub->add_option("--S0", opts->spot, "evaluation spot");
  sub->add_option("--space", opts->space, "space cells");
  sub->add_option("--time", opts->time, "time steps");
  sub->add_option("--grid", [opts](const std::vector<std::string>& vals) {
    // NxM shorthand
    const auto& s = vals.front();
    const auto x = s.find('x');
    if (x == std::string::npos) return false;
    opts->space = std::stoul(s.substr(0, x));
    opts->time = std::stoul(s.substr(x + 1));
    return true;
  }, "space x time shorthand, e.g. 400x400");
  sub->add_option("--n-std", opts->n_std, "domain half-width in sigma sqrt(T)");
  sub->add_option("--rannacher", opts->rannacher, "implicit-Euler half-steps");
  sub->add_option("--surface-csv", opts->surface_csv, "also export the w surface");
  sub->callback([opts] { run_pde(*opts); });
}

}  // namespace pathbs::cli
