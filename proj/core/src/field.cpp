#include "pathbs/field.hpp"

#include <cmath>
#include <stdexcept>

#include "pathbs/rng.hpp"

namespace pathbs {

TwoParamField::TwoParamField(TimeGrid grid, FieldShape shape, std::size_t dimension)
    : grid_(std::move(grid)), shape_(shape), dim_(dimension) {
  if (dim_ == 0) throw std::invalid_argument("TwoParamField: dimension must be >= 1");
  switch (shape_) {
    case FieldShape::Scalar: comp_ = 1; break;
    case FieldShape::Vector: comp_ = dim_; break;
    case FieldShape::Matrix: comp_ = dim_ * dim_; break;
  }
  const std::size_t n = grid_.size();
  data_.assign(n * (n + 1) / 2 * comp_, 0.0);
}

double TwoParamField::norm(std::size_t i, std::size_t j) const {
  const auto e = at(i, j);
  double s = 0.0;
  for (double v : e) s += v * v;
  return std::sqrt(s);
}

TwoParamField TwoParamField::coarsen(std::size_t stride) const {
  TimeGrid cg = grid_.coarsen(stride);
  TwoParamField out(cg, shape_, dim_);
  for (std::size_t i = 0; i < cg.size(); ++i) {
    const std::size_t fi = grid_.index_of(cg[i]);
    for (std::size_t j = i; j < cg.size(); ++j) {
      const std::size_t fj = grid_.index_of(cg[j]);
      auto dst = out.at(i, j);
      const auto src = at(fi, fj);
      for (std::size_t c = 0; c < comp_; ++c) dst[c] = src[c];
    }
  }
  return out;
}

void TwoParamField::check_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) throw std::invalid_argument("TwoParamField: non-finite entry");
}

std::vector<double> delta_defect_idx(const TwoParamField& field, std::size_t i, std::size_t k,
                                     std::size_t j) {
  if (!(i <= k && k <= j) || j >= field.grid().size())
    throw std::invalid_argument("delta_defect: indices must satisfy s <= u <= t on grid");
  const auto st = field.at(i, j);
  const auto su = field.at(i, k);
  const auto ut = field.at(k, j);
  std::vector<double> d(field.components());
  for (std::size_t c = 0; c < d.size(); ++c) d[c] = st[c] - su[c] - ut[c];
  return d;
}

std::vector<double> delta_defect(const TwoParamField& field, double s, double u, double t) {
  const auto& g = field.grid();
  return delta_defect_idx(field, g.index_of(s), g.index_of(u), g.index_of(t));
}

double delta_defect_norm_idx(const TwoParamField& field, std::size_t i, std::size_t k,
                             std::size_t j) {
  const auto st = field.at(i, j);
  const auto su = field.at(i, k);
  const auto ut = field.at(k, j);
  double s2 = 0.0;
  for (std::size_t c = 0; c < field.components(); ++c) {
    const double d = st[c] - su[c] - ut[c];
    s2 += d * d;
  }
  return std::sqrt(s2);
}

TwoParamField increments_field(const SampledPath& path) {
  const std::size_t d = path.dimension();
  TwoParamField out(path.grid(), d == 1 ? FieldShape::Scalar : FieldShape::Vector, d);
  const std::size_t n = path.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      auto e = out.at(i, j);
      for (std::size_t c = 0; c < d; ++c) e[c] = path.at(j, c) - path.at(i, c);
    }
  return out;
}

DefectScan max_delta_defect(const TwoParamField& field, std::size_t exhaustive_cap,
                            std::size_t sample_count, std::uint64_t seed) {
  const std::size_t n = field.grid().size();
  DefectScan scan;
  if (n <= exhaustive_cap) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i; k < n; ++k)
        for (std::size_t j = k; j < n; ++j)
          scan.max_defect = std::max(scan.max_defect, delta_defect_norm_idx(field, i, k, j));
    return scan;
  }
  scan.exhaustive = false;
  SplitMix64 rng(seed);
  for (std::size_t c = 0; c < sample_count; ++c) {
    std::size_t a = rng.below(n), b = rng.below(n), m = rng.below(n);
    if (a > b) std::swap(a, b);
    if (m < a) std::swap(a, m);
    if (m > b) std::swap(m, b);
    scan.max_defect = std::max(scan.max_defect, delta_defect_norm_idx(field, a, m, b));
  }
  return scan;
}

ControlField::ControlField(TwoParamField field, double tol, std::size_t exhaustive_cap)
    : field_(std::move(field)) {
  if (field_.shape() != FieldShape::Scalar)
    throw std::invalid_argument("ControlField: control must be a scalar field");
  const std::size_t n = field_.grid().size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (field_.value(i, j) < -tol)
        throw std::invalid_argument("ControlField: negative value");
  for (std::size_t i = 0; i < n; ++i)
    if (field_.value(i, i) != 0.0)
      throw std::invalid_argument("ControlField: nonzero diagonal");

  auto check_triple = [&](std::size_t i, std::size_t k, std::size_t j) {
    const double w = field_.value(i, j);
    const double slack = tol * (1.0 + std::fabs(w));
    if (field_.value(i, k) + field_.value(k, j) > w + slack)
      throw std::invalid_argument("ControlField: superadditivity violated");
    // interval monotonicity follows on grid triples from the two nested pairs
    if (field_.value(i, k) > w + slack || field_.value(k, j) > w + slack)
      throw std::invalid_argument("ControlField: interval monotonicity violated");
  };

  if (n <= exhaustive_cap) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i; k < n; ++k)
        for (std::size_t j = k; j < n; ++j) check_triple(i, k, j);
  } else {
    SplitMix64 rng(0xc0117201u);
    for (std::size_t c = 0; c < 100000; ++c) {
      std::size_t a = rng.below(n), b = rng.below(n), m = rng.below(n);
      if (a > b) std::swap(a, b);
      if (m < a) std::swap(a, m);
      if (m > b) std::swap(m, b);
      check_triple(a, m, b);
    }
  }
}

ControlField ControlField::trusted(TwoParamField field) {
  if (field.shape() != FieldShape::Scalar)
    throw std::invalid_argument("ControlField: control must be a scalar field");
  return ControlField(Trusted{}, std::move(field));
}

ControlField ControlField::length(const TimeGrid& grid) {
  TwoParamField f(grid, FieldShape::Scalar);
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) f.value(i, j) = grid[j] - grid[i];
  return ControlField(std::move(f));
}

double control_osc(const ControlField& control, double mesh) {
  if (!(mesh > 0.0)) throw std::invalid_argument("control_osc: mesh must be positive");
  const auto& g = control.grid();
  const std::size_t n = g.size();
  double out = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      if (g[j] - g[i] > mesh) break;
      out = std::max(out, control(i, j));
    }
  return out;
}

}  // namespace pathbs
