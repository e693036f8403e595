#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pathbs {

/**
 * TimeGrid: strictly increasing sample times on [0, T], first point 0,
 * last point T > 0. Times are in years. This is the universal
 * discretisation object: paths, fields and ledgers are all indexed by one.
 */
class TimeGrid {
public:
  explicit TimeGrid(std::vector<double> times);

  static TimeGrid uniform(double horizon, std::size_t cells);
  // 2^levels cells on [0, horizon]
  static TimeGrid dyadic(double horizon, int levels);

  std::size_t size() const { return times_.size(); }
  std::size_t cells() const { return times_.size() - 1; }
  double operator[](std::size_t k) const { return times_[k]; }
  double horizon() const { return times_.back(); }
  double mesh() const { return mesh_; }
  std::span<const double> times() const { return times_; }

  // Keeps every `stride`-th point plus the final one.
  TimeGrid coarsen(std::size_t stride) const;

  // Index of t in the grid; throws if t is not a grid time (tol-relative).
  std::size_t index_of(double t, double tol = 1e-12) const;
  bool contains(double t, double tol = 1e-12) const;

  // True when every time of `coarse` is a time of this grid.
  bool refines(const TimeGrid& coarse, double tol = 1e-12) const;

  bool operator==(const TimeGrid& other) const { return times_ == other.times_; }

private:
  std::vector<double> times_;
  double mesh_ = 0.0;
};

/**
 * SampledPath: d-dimensional path values on a TimeGrid. Values are stored
 * flat, one d-vector per grid time; all entries must be finite.
 */
class SampledPath {
public:
  SampledPath(TimeGrid grid, std::vector<double> values, std::size_t dimension = 1);

  static SampledPath scalar(TimeGrid grid, std::vector<double> values);
  static SampledPath zero(const TimeGrid& grid, std::size_t dimension = 1);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return grid_.size(); }

  std::span<const double> value(std::size_t k) const {
    return {values_.data() + k * dim_, dim_};
  }
  double at(std::size_t k, std::size_t i = 0) const { return values_[k * dim_ + i]; }
  double& at(std::size_t k, std::size_t i = 0) { return values_[k * dim_ + i]; }
  std::span<const double> raw() const { return values_; }

  // Path restricted to every `stride`-th node (plus the last one).
  SampledPath coarsen(std::size_t stride) const;

  // Scalar view of one coordinate.
  std::vector<double> coordinate(std::size_t i) const;

private:
  TimeGrid grid_;
  std::vector<double> values_;
  std::size_t dim_;
};

// Strict CSV parse of the `t,x1,...,xd` path format: header required, rows
// sorted by t, duplicate times / NaN / Inf rejected.
SampledPath read_path_csv(const std::string& filename);
void write_path_csv(const std::string& filename, const SampledPath& path);

}  // namespace pathbs
