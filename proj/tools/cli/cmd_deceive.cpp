#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "cli/commands.hpp"
#include "cli/common.hpp"
#include "pathbs/enhance.hpp"
#include "pathbs/rng.hpp"
#include "pathbs/stats.hpp"
#include "pathbs/volterra.hpp"

namespace pathbs::cli {

namespace {

struct DeceiveOpts {
  CommonOpts common;
  std::string convention = "variance-matched";
  double sigma1 = 0.2;
  double sigma2 = 0.3;
  double mu = 0.05;
  double x0 = 1.0;
  double horizon = 1.0;
  std::size_t mc = 10000;
  int fine_level = 14;
  std::size_t probe_count = 5;
  std::size_t pi_cells = 8;
  std::size_t ks_fine_per_cell = 64;
  double ks_alpha = 0.01;
};

DeceptiveSpec make_spec(const DeceiveOpts& o) {
  DeceptiveSpec spec;
  spec.x0 = o.x0;
  spec.mu = o.mu;
  spec.sigma1 = o.sigma1;
  spec.sigma2 = o.sigma2;
  if (o.convention == "variance-matched")
    spec.convention = HConvention::VarianceMatched;
  else if (o.convention == "as-printed")
    spec.convention = HConvention::AsPrinted;
  else
    throw CLI::ValidationError("--convention must be variance-matched|as-printed");
  return spec;
}

void run_deceive(const DeceiveOpts& o) {
  const auto spec = make_spec(o);
  const auto grid = TimeGrid::dyadic(o.horizon, o.fine_level);
  const std::size_t n = grid.size();

  // probe indices for marginal statistics
  std::vector<std::size_t> probes;
  for (std::size_t k = 1; k <= o.probe_count; ++k)
    probes.push_back(k * (n - 1) / o.probe_count);

  struct SeedOut {
    std::vector<double> log_y;
    double realized = 0.0;         // realized log-bracket over [0, T]
    double realized_window = 0.0;  // over [T/4, T], clear of the t0 kernel singularity
  };
  const std::size_t window_start = (n - 1) / 4;
  std::vector<SeedOut> outs(o.mc);
  parallel_for_index(o.mc, [&](std::size_t i) {
    const auto y = deceptive_path(spec, grid, stream_seed(o.common.seed, i));
    auto& so = outs[i];
    so.log_y.resize(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p)
      so.log_y[p] = std::log(y.at(probes[p], 0));
    double qv = 0.0, qvw = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double d = std::log(y.at(k + 1, 0)) - std::log(y.at(k, 0));
      qv += d * d;
      if (k >= window_start) qvw += d * d;
    }
    so.realized = qv;
    so.realized_window = qvw;
  });

  // marginal CSV: per probe time, sample mean/var of log Y vs theory
  const std::string marg_file = out_path(o.common.out_dir, "deceive_marginals.csv");
  {
    std::ofstream out(marg_file);
    out << "t,mean_logY,var_logY,se_var,theory_mean,theory_var_sigma1\n";
    char buf[256];
    for (std::size_t p = 0; p < probes.size(); ++p) {
      std::vector<double> sample(o.mc);
      for (std::size_t i = 0; i < o.mc; ++i) sample[i] = outs[i].log_y[p];
      const auto s = summarize(sample);
      const double t = grid[probes[p]];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, s.mean,
                    s.variance, s.se_variance,
                    std::log(spec.x0) + linear_drag(t, 0.0, spec.mu, spec.sigma1),
                    spec.sigma1 * spec.sigma1 * t);
      out << buf;
    }
  }

  // realized-bracket CSV
  const std::string rb_file = out_path(o.common.out_dir, "deceive_realized_bracket.csv");
  std::vector<double> realized(o.mc), realized_w(o.mc);
  for (std::size_t i = 0; i < o.mc; ++i) {
    realized[i] = outs[i].realized;
    realized_w[i] = outs[i].realized_window;
  }
  const auto rb = summarize(realized);
  const auto rbw = summarize(realized_w);
  const double t_window = grid[window_start];
  {
    std::ofstream out(rb_file);
    out << "s,t,mean_realized_logbracket,se_mean,theory_sigma2\n";
    char buf[224];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", 0.0, o.horizon, rb.mean,
                  rb.se_mean, spec.sigma2 * spec.sigma2 * o.horizon);
    out << buf;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", t_window, o.horizon,
                  rbw.mean, rbw.se_mean, spec.sigma2 * spec.sigma2 * (o.horizon - t_window));
    out << buf;
  }

  // pi-indistinguishability: KS test of log-increments per pi cell
  const auto pi = TimeGrid::uniform(o.horizon, o.pi_cells);
  std::vector<std::vector<double>> cell_samples(o.pi_cells, std::vector<double>(o.mc));
  parallel_for_index(o.mc, [&](std::size_t i) {
    const auto y =
        grid_concatenated_path(pi, spec, o.ks_fine_per_cell, stream_seed(o.common.seed ^ 0xabcdULL, i));
    for (std::size_t c = 0; c < o.pi_cells; ++c) {
      const std::size_t a = y.grid().index_of(pi[c]);
      const std::size_t b = y.grid().index_of(pi[c + 1]);
      cell_samples[c][i] = std::log(y.at(b, 0)) - std::log(y.at(a, 0));
    }
  });
  std::size_t ks_pass = 0;
  json ks_cells = json::array();
  for (std::size_t c = 0; c < o.pi_cells; ++c) {
    const double dt = pi[c + 1] - pi[c];
    const double mean = linear_drag(dt, 0.0, spec.mu, spec.sigma1);
    const double sd = spec.sigma1 * std::sqrt(dt);
    const auto ks = ks_test(cell_samples[c],
                            [&](double x) { return normal_cdf((x - mean) / sd); });
    if (ks.p_value > o.ks_alpha) ++ks_pass;
    json j;
    j["cell"] = c;
    j["statistic"] = ks.statistic;
    j["p_value"] = ks.p_value;
    ks_cells.push_back(j);
  }

  RunConfig cfg;
  cfg.set("cmd", "deceive");
  cfg.set("convention", o.convention);
  cfg.set_num("sigma1", o.sigma1);
  cfg.set_num("sigma2", o.sigma2);
  cfg.set_num("mu", o.mu);
  cfg.set_num("x0", o.x0);
  cfg.set_num("T", o.horizon);
  cfg.set_int("mc", static_cast<long long>(o.mc));
  cfg.set_int("fine_level", o.fine_level);
  cfg.set_int("pi_cells", static_cast<long long>(o.pi_cells));
  cfg.set_int("seed", static_cast<long long>(o.common.seed));

  json rep;
  rep["config"] = cfg.to_json();
  rep["config_hash"] = cfg.hash();
  rep["seed"] = o.common.seed;
  rep["effective_hurst"] = spec.effective_hurst();
  rep["mean_realized_logbracket"] = rb.mean;
  rep["realized_se"] = rb.se_mean;
  rep["theory_realized_sigma2"] = spec.sigma2 * spec.sigma2 * o.horizon;
  rep["window_start"] = t_window;
  rep["mean_realized_logbracket_window"] = rbw.mean;
  rep["realized_window_se"] = rbw.se_mean;
  rep["theory_realized_window"] = spec.sigma2 * spec.sigma2 * (o.horizon - t_window);
  rep["ks_pass_fraction"] = static_cast<double>(ks_pass) / static_cast<double>(o.pi_cells);
  rep["ks_cells"] = ks_cells;
  rep["marginals_csv"] = "deceive_marginals.csv";
  rep["realized_bracket_csv"] = "deceive_realized_bracket.csv";
  write_json_file(out_path(o.common.out_dir, "deceive_report.json"), rep);
  std::cout << rep.dump(2) << "\n";
}

}  // namespace

void register_deceive(CLI::App& app) {
  auto opts = std::make_shared<DeceiveOpts>();
  CLI::App* sub = app.add_subcommand(
      "deceive", "Deceptive dynamics lab: marginals vs realized quadratic variation");
  add_common(*sub, opts->common);
  sub->add_option("--convention", opts->convention, "variance-matched|as-printed");
  sub->add_option("--sigma1", opts->sigma1, "marginal volatility");
  sub->add_option("--sigma2", opts->sigma2, "quadratic-variation volatility");
  sub->add_option("--mu", opts->mu, "drift");
  sub->add_option("--x0", opts->x0, "initial level");
  sub->add_option("--T", opts->horizon, "horizon");
  sub->add_option("--mc", opts->mc, "Monte Carlo seeds");
  sub->add_option("--fine-level", opts->fine_level, "dyadic level of the simulation grid");
  sub->add_option("--probes", opts->probe_count, "marginal probe times");
  sub->add_option("--pi-cells", opts->pi_cells, "coarse grid cells for the KS suite");
  sub->add_option("--ks-fine-per-cell", opts->ks_fine_per_cell, "simulation points per cell");
  sub->add_option("--ks-alpha", opts->ks_alpha, "KS significance level");
  sub->callback([opts] { run_deceive(*opts); });
}

}  // namespace pathbs::cli
