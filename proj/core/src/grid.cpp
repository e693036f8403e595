#include "pathbs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathbs {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw std::invalid_argument("TimeGrid: need at least two times");
  if (times_.front() != 0.0) throw std::invalid_argument("TimeGrid: first time must be 0");
  if (!(times_.back() > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
  mesh_ = 0.0;
  for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
    const double gap = times_[k + 1] - times_[k];
    if (!(gap > 0.0)) throw std::invalid_argument("TimeGrid: times must be strictly increasing");
    if (!std::isfinite(times_[k + 1])) throw std::invalid_argument("TimeGrid: non-finite time");
    mesh_ = std::max(mesh_, gap);
  }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t cells) {
  if (!(horizon > 0.0) || cells == 0)
    throw std::invalid_argument("TimeGrid::uniform: bad horizon or cell count");
  std::vector<double> t(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k)
    t[k] = horizon * static_cast<double>(k) / static_cast<double>(cells);
  t.back() = horizon;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::dyadic(double horizon, int levels) {
  if (levels < 0 || levels > 30) throw std::invalid_argument("TimeGrid::dyadic: bad level");
  return uniform(horizon, std::size_t{1} << levels);
}

TimeGrid TimeGrid::coarsen(std::size_t stride) const {
  if (stride == 0) throw std::invalid_argument("TimeGrid::coarsen: zero stride");
  std::vector<double> t;
  for (std::size_t k = 0; k < times_.size(); k += stride) t.push_back(times_[k]);
  if (t.back() != times_.back()) t.push_back(times_.back());
  return TimeGrid(std::move(t));
}

std::size_t TimeGrid::index_of(double t, double tol) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t - tol * (1.0 + std::fabs(t)));
  if (it != times_.end() && std::fabs(*it - t) <= tol * (1.0 + std::fabs(t)))
    return static_cast<std::size_t>(it - times_.begin());
  throw std::invalid_argument("TimeGrid::index_of: time not on grid");
}

bool TimeGrid::contains(double t, double tol) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t - tol * (1.0 + std::fabs(t)));
  return it != times_.end() && std::fabs(*it - t) <= tol * (1.0 + std::fabs(t));
}

bool TimeGrid::refines(const TimeGrid& coarse, double tol) const {
  for (double t : coarse.times())
    if (!contains(t, tol)) return false;
  return true;
}

SampledPath::SampledPath(TimeGrid grid, std::vector<double> values, std::size_t dimension)
    : grid_(std::move(grid)), values_(std::move(values)), dim_(dimension) {
  if (dim_ == 0) throw std::invalid_argument("SampledPath: dimension must be >= 1");
  if (values_.size() != grid_.size() * dim_)
    throw std::invalid_argument("SampledPath: value count must equal grid length x dimension");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("SampledPath: non-finite value");
}

SampledPath SampledPath::scalar(TimeGrid grid, std::vector<double> values) {
  return SampledPath(std::move(grid), std::move(values), 1);
}

SampledPath SampledPath::zero(const TimeGrid& grid, std::size_t dimension) {
  return SampledPath(grid, std::vector<double>(grid.size() * dimension, 0.0), dimension);
}

SampledPath SampledPath::coarsen(std::size_t stride) const {
  TimeGrid cg = grid_.coarsen(stride);
  std::vector<double> vals;
  vals.reserve(cg.size() * dim_);
  for (std::size_t k = 0; k < cg.size(); ++k) {
    const std::size_t src = grid_.index_of(cg[k]);
    for (std::size_t i = 0; i < dim_; ++i) vals.push_back(values_[src * dim_ + i]);
  }
  return SampledPath(std::move(cg), std::move(vals), dim_);
}

std::vector<double> SampledPath::coordinate(std::size_t i) const {
  if (i >= dim_) throw std::invalid_argument("SampledPath::coordinate: index out of range");
  std::vector<double> out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = values_[k * dim_ + i];
  return out;
}

}  // namespace pathbs
