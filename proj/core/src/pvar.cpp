#include "pathbs/pvar.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pathbs {

namespace {

double dp_pvar(const TwoParamField& field, double p, std::size_t lo, std::size_t hi) {
  // best[j] = sup over partitions of [lo, j] anchored at both ends
  const std::size_t m = hi - lo + 1;
  std::vector<double> best(m, 0.0);
  for (std::size_t j = 1; j < m; ++j) {
    double b = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      const double cand = best[i] + std::pow(field.norm(lo + i, lo + j), p);
      if (cand > b) b = cand;
    }
    best[j] = b;
  }
  return best[m - 1];
}

double grid_sum(const TwoParamField& field, double p, std::size_t lo, std::size_t hi,
                std::size_t stride) {
  double s = 0.0;
  std::size_t i = lo;
  while (i < hi) {
    const std::size_t j = std::min(i + stride, hi);
    s += std::pow(field.norm(i, j), p);
    i = j;
  }
  return s;
}

}  // namespace

PVarResult p_variation_window(const TwoParamField& field, double p, PVarMode mode, std::size_t lo,
                              std::size_t hi, std::size_t max_exact_points) {
  if (p < 1.0) throw std::invalid_argument("p_variation: p must be >= 1");
  if (hi >= field.grid().size() || lo > hi)
    throw std::invalid_argument("p_variation: bad index window");
  PVarResult r;
  if (lo == hi) return r;
  const std::size_t m = hi - lo + 1;
  if (mode == PVarMode::Exact) {
    if (m > max_exact_points)
      throw std::invalid_argument("p_variation: exact mode on oversized grid");
    r.value = dp_pvar(field, p, lo, hi);
  } else {
    r.lower_bound = true;
    for (std::size_t stride = 1; stride < m; stride *= 2)
      r.value = std::max(r.value, grid_sum(field, p, lo, hi, stride));
    r.value = std::max(r.value, std::pow(field.norm(lo, hi), p));
  }
  r.norm = r.value > 0.0 ? std::pow(r.value, 1.0 / p) : 0.0;
  return r;
}

PVarResult p_variation(const TwoParamField& field, double p, PVarMode mode,
                       std::size_t max_exact_points) {
  return p_variation_window(field, p, mode, 0, field.grid().size() - 1, max_exact_points);
}

ControlField cell_sum_control(const TwoParamField& field, double p) {
  if (p < 1.0) throw std::invalid_argument("cell_sum_control: p must be >= 1");
  const auto& g = field.grid();
  const std::size_t n = g.size();
  std::vector<double> prefix(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k)
    prefix[k + 1] = prefix[k] + std::pow(field.norm(k, k + 1), p);
  TwoParamField out(g, FieldShape::Scalar);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.value(i, j) = prefix[j] - prefix[i];
  return ControlField::trusted(std::move(out));
}

ControlField path_control(const SampledPath& path, double p) {
  const auto& g = path.grid();
  const std::size_t n = g.size();
  const auto inc = increments_field(path);
  std::vector<double> prefix(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k)
    prefix[k + 1] = prefix[k] + std::pow(inc.norm(k, k + 1), p);
  TwoParamField out(g, FieldShape::Scalar);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      out.value(i, j) = prefix[j] - prefix[i] + (g[j] - g[i]);
  return ControlField::trusted(std::move(out));
}

ControlField combine_controls(const ControlField& a, double ca, const ControlField& b, double cb) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("combine_controls: grid mismatch");
  if (ca < 0.0 || cb < 0.0)
    throw std::invalid_argument("combine_controls: coefficients must be nonnegative");
  const std::size_t n = a.grid().size();
  TwoParamField out(a.grid(), FieldShape::Scalar);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      out.value(i, j) = ca * a(i, j) + cb * b(i, j);
  return ControlField::trusted(std::move(out));
}

}  // namespace pathbs
