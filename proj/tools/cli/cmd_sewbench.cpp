#include <cmath>
#include <iostream>
#include <memory>

#include "cli/commands.hpp"
#include "cli/common.hpp"
#include "pathbs/rng.hpp"
#include "pathbs/sewing.hpp"

namespace pathbs::cli {

namespace {

struct SewBenchOpts {
  CommonOpts common;
  std::size_t fields = 50;
  int level = 7;
  std::vector<double> gammas{1.2, 1.5, 2.0};
};

// synthetic approximately additive field: additive noise part plus a
// c (t-s)^gamma perturbation whose defect saturates the sewing constant
TwoParamField synthetic_field(const TimeGrid& g, double gamma, SplitMix64& rng, double* c_out) {
  std::vector<double> x{0.0};
  for (std::size_t k = 0; k + 1 < g.size(); ++k)
    x.push_back(x.back() + rng.normal() * std::sqrt(g[k + 1] - g[k]) * 0.3);
  const double c = 0.2 + rng.uniform();
  if (c_out) *c_out = c;
  TwoParamField f(g, FieldShape::Scalar);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i; j < g.size(); ++j)
      f.value(i, j) = x[j] - x[i] + c * std::pow(g[j] - g[i], gamma);
  return f;
}

void run_sewbench(const SewBenchOpts& o) {
  std::size_t violations = 0;
  std::size_t checked_pairs = 0;
  double worst_margin = 1e300;  // min over pairs of (bound - observed)
  SplitMix64 rng(o.common.seed);

  json runs = json::array();
  for (std::size_t f = 0; f < o.fields; ++f) {
    const double gamma = o.gammas[f % o.gammas.size()];
    const auto g = TimeGrid::dyadic(1.0, o.level);
    double c = 0.0;
    const auto field = synthetic_field(g, gamma, rng, &c);
    const auto res = sew(field, ControlField::length(g), gamma);
    const double constant = res.delta_norm / (1.0 - std::pow(2.0, 1.0 - gamma));
    double field_worst = 1e300;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        const double integral = res.integral_path.at(j, 0) - res.integral_path.at(i, 0);
        const double observed = std::fabs(integral - field.value(i, j));
        const double bound = constant * std::pow(g[j] - g[i], gamma);
        ++checked_pairs;
        if (observed > bound + 1e-12 * (1.0 + bound)) ++violations;
        field_worst = std::min(field_worst, bound - observed);
      }
    worst_margin = std::min(worst_margin, field_worst);
    json j;
    j["gamma"] = gamma;
    j["delta_norm"] = res.delta_norm;
    j["perturbation"] = c;
    j["min_margin"] = field_worst;
    runs.push_back(j);
  }

  RunConfig cfg;
  cfg.set("cmd", "sew-bench");
  cfg.set_int("fields", static_cast<long long>(o.fields));
  cfg.set_int("level", o.level);
  cfg.set_int("seed", static_cast<long long>(o.common.seed));

  json rep;
  rep["config"] = cfg.to_json();
  rep["config_hash"] = cfg.hash();
  rep["seed"] = o.common.seed;
  rep["fields"] = o.fields;
  rep["checked_pairs"] = checked_pairs;
  rep["violations"] = violations;
  rep["worst_margin"] = worst_margin;
  rep["runs"] = runs;
  write_json_file(out_path(o.common.out_dir, "sewbench_report.json"), rep);
  std::cout << rep.dump(2) << "\n";
  if (violations > 0) throw std::runtime_error("sew-bench: error bound violated");
}

}  // namespace

void register_sewbench(CLI::App& app) {
  auto opts = std::make_shared<SewBenchOpts>();
  CLI::App* sub = app.add_subcommand(
      "sew-bench", "Sewing error-bound sweep over synthetic approximately-additive fields");
  add_common(*sub, opts->common);
  sub->add_option("--fields", opts->fields, "number of synthetic fields");
  sub->add_option("--level", opts->level, "dyadic grid level");
  sub->add_option("--gammas", opts->gammas, "gamma exponents cycled over fields");
  sub->callback([opts] { run_sewbench(*opts); });
}

}  // namespace pathbs::cli
