#include "pathbs/sewing.hpp"

#include <cmath>
#include <stdexcept>

#include "pathbs/enhance.hpp"
#include "pathbs/rng.hpp"

namespace pathbs {

namespace {

// ||dXi||_{w,gamma} = sup |dXi_{s,u,t}| / w^gamma(s,t); zero-control triples
// force the epsilon * (t-s) perturbation flagged in the result.
struct DeltaNormScan {
  double norm = 0.0;
  bool exhaustive = true;
  bool perturbed = false;
};

DeltaNormScan delta_norm_scan(const TwoParamField& field, const ControlField& control,
                              double gamma, const SewingOptions& opt) {
  const auto& g = field.grid();
  const std::size_t n = g.size();
  const double horizon = g.horizon();
  DeltaNormScan scan;
  auto visit = [&](std::size_t i, std::size_t k, std::size_t j) {
    const double defect = delta_defect_norm_idx(field, i, k, j);
    if (defect == 0.0) return;
    double w = control(i, j);
    if (w <= 0.0) {
      scan.perturbed = true;
      w = 1e-12 * (g[j] - g[i]) / horizon;
      if (w <= 0.0) return;
    }
    scan.norm = std::max(scan.norm, defect / std::pow(w, gamma));
  };
  if (n <= opt.triple_scan_cap) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k)
        for (std::size_t j = k; j < n; ++j) visit(i, k, j);
  } else {
    scan.exhaustive = false;
    SplitMix64 rng(0xdeadULL);
    for (std::size_t c = 0; c < opt.triple_samples; ++c) {
      std::size_t a = rng.below(n), b = rng.below(n), m = rng.below(n);
      if (a > b) std::swap(a, b);
      if (m < a) std::swap(a, m);
      if (m > b) std::swap(m, b);
      visit(a, m, b);
    }
  }
  return scan;
}

}  // namespace

SewingResult sew(const TwoParamField& field, const ControlField& control, double gamma,
                 const SewingOptions& opt) {
  if (!(gamma > 1.0)) throw std::invalid_argument("sew: gamma must exceed 1");
  if (!(field.grid() == control.grid()))
    throw std::invalid_argument("sew: field and control grids differ");
  const auto& g = field.grid();
  const std::size_t n = g.size();
  const std::size_t comp = field.components();

  for (std::size_t i = 0; i < n; ++i)
    if (field.norm(i, i) != 0.0) throw std::invalid_argument("sew: field not null on diagonal");

  const auto scan = delta_norm_scan(field, control, gamma, opt);
  if (!std::isfinite(scan.norm)) throw std::invalid_argument("sew: ||dXi|| not finite on grid");

  // finest-partition compensated sum; the discrete stand-in for |pi| -> 0
  std::vector<double> vals(n * comp, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto cell = field.at(k, k + 1);
    for (std::size_t c = 0; c < comp; ++c) vals[(k + 1) * comp + c] = vals[k * comp + c] + cell[c];
  }
  SampledPath integral(g, std::move(vals), comp);

  // dyadic-coarsening evidence for the refinement limit
  SewingResult out{integral, TwoParamField(g, FieldShape::Scalar), gamma, 0.0, true, false, {}, {}, true};
  out.delta_norm = scan.norm;
  out.delta_norm_exhaustive = scan.exhaustive;
  out.control_perturbed = scan.perturbed;

  const int levels = std::max(0, opt.refinement_levels);
  std::vector<std::vector<double>> level_sums;
  for (int lv = levels; lv >= 0; --lv) {
    const std::size_t stride = std::size_t{1} << lv;
    if (stride >= n && lv > 0) continue;
    std::vector<double> acc(comp, 0.0);
    std::size_t i = 0;
    while (i + 1 < n) {
      const std::size_t j = std::min(i + stride, n - 1);
      const auto e = field.at(i, j);
      for (std::size_t c = 0; c < comp; ++c) acc[c] += e[c];
      i = j;
    }
    level_sums.push_back(std::move(acc));
  }
  for (const auto& v : level_sums) {
    double s2 = 0.0;
    for (double x : v) s2 += x * x;
    out.level_values.push_back(comp == 1 ? v[0] : std::sqrt(s2));
  }
  for (std::size_t k = 0; k + 1 < level_sums.size(); ++k) {
    double s2 = 0.0;
    for (std::size_t c = 0; c < comp; ++c) {
      const double d = level_sums[k + 1][c] - level_sums[k][c];
      s2 += d * d;
    }
    out.level_diffs.push_back(std::sqrt(s2));
  }

  const double scale = std::fabs(out.level_values.empty() ? 0.0 : out.level_values.back());
  const double tol = opt.atol + opt.rtol * scale;
  if (!out.level_diffs.empty()) {
    out.converged = out.level_diffs.back() < tol;
    const bool grows = out.level_diffs.size() >= 2 &&
                       out.level_diffs.back() > 2.0 * out.level_diffs.front() &&
                       out.level_diffs.back() > tol;
    if (grows && opt.throw_on_divergence)
      throw std::runtime_error("sew: divergent refinement (level differences grow)");
  }

  const double constant = scan.norm / (1.0 - std::pow(2.0, 1.0 - gamma));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      out.local_error_bound.value(i, j) = constant * std::pow(control(i, j), gamma);
  return out;
}

SewingResult young_detail(const SampledPath& H, const SampledPath& X, const YoungParams& params) {
  if (!(H.grid() == X.grid())) throw std::invalid_argument("young: grid mismatch between H and X");
  if (H.dimension() != X.dimension())
    throw std::invalid_argument("young: integrand covector dimension must match integrator");
  if (!(1.0 / params.p + 1.0 / params.q > 1.0))
    throw std::invalid_argument("young: declared exponents are not Young complementary");
  const std::size_t n = X.size();
  const std::size_t d = X.dimension();
  TwoParamField xi(X.grid(), FieldShape::Scalar);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const std::size_t e = params.evaluation == YoungEvaluation::Adapted ? i : j;
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += H.at(e, c) * (X.at(j, c) - X.at(i, c));
      xi.value(i, j) = s;
    }
  const ControlField omega = path_control(X, params.p);
  const double gamma = std::min(2.0, 1.0 / params.p + 1.0 / params.q);
  return sew(xi, omega, gamma, params.sewing);
}

SampledPath young(const SampledPath& H, const SampledPath& X, const YoungParams& params) {
  return young_detail(H, X, params).integral_path;
}

ControlledPath::ControlledPath(SampledPath H, SampledPath H_prime, SampledPath reference, double p,
                               double q, double symmetry_tol)
    : H_(std::move(H)), H_prime_(std::move(H_prime)), reference_(std::move(reference)), p_(p), q_(q) {
  if (!(H_.grid() == reference_.grid()) || !(H_prime_.grid() == reference_.grid()))
    throw std::invalid_argument("ControlledPath: grids must agree");
  const std::size_t d = reference_.dimension();
  if (H_.dimension() != d || H_prime_.dimension() != d * d)
    throw std::invalid_argument("ControlledPath: H must hold d covectors, H' d x d matrices");
  if (!(p_ >= 1.0) || !(q_ >= 1.0)) throw std::invalid_argument("ControlledPath: exponents < 1");
  for (std::size_t k = 0; k < H_prime_.size(); ++k)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b) {
        const double diff = std::fabs(H_prime_.at(k, a * d + b) - H_prime_.at(k, b * d + a));
        const double scale = 1.0 + std::fabs(H_prime_.at(k, a * d + b));
        if (diff > symmetry_tol * scale)
          throw std::invalid_argument("ControlledPath: H' not symmetric");
      }
}

TwoParamField ControlledPath::remainder_field() const {
  const std::size_t n = reference_.size();
  const std::size_t d = reference_.dimension();
  TwoParamField out(reference_.grid(), d == 1 ? FieldShape::Scalar : FieldShape::Vector, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      auto e = out.at(i, j);
      for (std::size_t a = 0; a < d; ++a) {
        double hx = 0.0;
        for (std::size_t b = 0; b < d; ++b)
          hx += H_prime_.at(i, a * d + b) * (reference_.at(j, b) - reference_.at(i, b));
        e[a] = H_.at(j, a) - H_.at(i, a) - hx;
      }
    }
  return out;
}

RemainderReport remainder_report(const ControlledPath& cp, PVarMode mode,
                                 std::size_t max_exact_points) {
  RemainderReport rep{cp.remainder_field()};
  const auto pv = p_variation(rep.remainder_field, cp.pstar(), mode, max_exact_points);
  rep.pstar_variation = pv.value;
  rep.lower_bound = pv.lower_bound;
  return rep;
}

namespace {

void require_matching_trace(const ControlledPath& cp, const EnhancedPath& ep) {
  if (!(cp.reference().grid() == ep.grid()))
    throw std::invalid_argument("compensated_integral: trace grid mismatch");
  for (std::size_t k = 0; k < cp.reference().size(); ++k)
    for (std::size_t c = 0; c < cp.reference().dimension(); ++c)
      if (cp.reference().at(k, c) != ep.trace().at(k, c))
        throw std::invalid_argument("compensated_integral: trace values differ");
}

}  // namespace

SewingResult compensated_integral_detail(const ControlledPath& cp, const EnhancedPath& ep,
                                         const SewingOptions& opt) {
  require_matching_trace(cp, ep);
  const double p = cp.p(), q = cp.q();
  const double gamma = 2.0 / p + 1.0 / q;
  if (!(gamma > 1.0))
    throw std::invalid_argument("compensated_integral: 2/p + 1/q must exceed 1");

  const std::size_t n = cp.reference().size();
  const std::size_t d = cp.reference().dimension();
  const auto& X = cp.reference();
  const auto& H = cp.H();
  const auto& Hp = cp.H_prime();

  TwoParamField xi(X.grid(), FieldShape::Scalar);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += H.at(i, c) * (X.at(j, c) - X.at(i, c));
      const auto xx = ep.second_order(i, j);
      for (std::size_t c = 0; c < d * d; ++c) s += Hp.at(i, c) * xx[c];
      xi.value(i, j) = s;
    }

  // composite control of the approximate-additivity estimate:
  // w = w_R^(1 - 1/(g p)) w_X^(1/(g p)) + w_H'^(1/(g q)) w_XX^(2/(g p))
  const auto rem = cp.remainder_field();
  const ControlField wR = cell_sum_control(rem, cp.pstar());
  const ControlField wX = cell_sum_control(increments_field(X), p);
  const ControlField wHp = cell_sum_control(increments_field(Hp), q);
  const ControlField wXX = cell_sum_control(ep.second_order_field(), 0.5 * p);

  TwoParamField w(X.grid(), FieldShape::Scalar);
  const double e1 = 1.0 - 1.0 / (gamma * p), e2 = 1.0 / (gamma * p);
  const double e3 = 1.0 / (gamma * q), e4 = 2.0 / (gamma * p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      w.value(i, j) = std::pow(wR(i, j), e1) * std::pow(wX(i, j), e2) +
                      std::pow(wHp(i, j), e3) * std::pow(wXX(i, j), e4);
  return sew(xi, ControlField::trusted(std::move(w)), gamma, opt);
}

SampledPath compensated_integral(const ControlledPath& cp, const EnhancedPath& ep,
                                 const SewingOptions& opt) {
  return compensated_integral_detail(cp, ep, opt).integral_path;
}

}  // namespace pathbs
