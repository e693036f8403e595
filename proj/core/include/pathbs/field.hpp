#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pathbs/grid.hpp"

namespace pathbs {

enum class FieldShape { Scalar, Vector, Matrix };

/**
 * TwoParamField: values Xi_{s,t} on grid pairs s <= t, stored densely over
 * the simplex (n(n+1)/2 entries). Entry shape is scalar, d-vector or d x d
 * matrix (matrices stored row-major, symmetric where the producer says so).
 * Diagonal entries are identically zero.
 */
class TwoParamField {
public:
  TwoParamField(TimeGrid grid, FieldShape shape, std::size_t dimension = 1);

  const TimeGrid& grid() const { return grid_; }
  FieldShape shape() const { return shape_; }
  std::size_t dimension() const { return dim_; }
  std::size_t components() const { return comp_; }

  std::span<const double> at(std::size_t i, std::size_t j) const {
    return {data_.data() + offset(i, j), comp_};
  }
  std::span<double> at(std::size_t i, std::size_t j) {
    return {data_.data() + offset(i, j), comp_};
  }
  // Scalar convenience accessor (first component).
  double value(std::size_t i, std::size_t j) const { return data_[offset(i, j)]; }
  double& value(std::size_t i, std::size_t j) { return data_[offset(i, j)]; }

  // Euclidean / Frobenius norm of the (i,j) entry.
  double norm(std::size_t i, std::size_t j) const;

  // Restriction to every `stride`-th grid node (plus the last).
  TwoParamField coarsen(std::size_t stride) const;

  void check_finite() const;

private:
  std::size_t offset(std::size_t i, std::size_t j) const {
    // row i, column j >= i over the simplex
    const std::size_t n = grid_.size();
    return (i * (2 * n - i + 1) / 2 + (j - i)) * comp_;
  }

  TimeGrid grid_;
  FieldShape shape_;
  std::size_t dim_;
  std::size_t comp_;
  std::vector<double> data_;
};

// delta Xi_{s,u,t} = Xi_{s,t} - Xi_{s,u} - Xi_{u,t}; the additivity defect.
std::vector<double> delta_defect(const TwoParamField& field, double s, double u, double t);
std::vector<double> delta_defect_idx(const TwoParamField& field, std::size_t i, std::size_t k,
                                     std::size_t j);
double delta_defect_norm_idx(const TwoParamField& field, std::size_t i, std::size_t k,
                             std::size_t j);

// Increment field of a path: Xi_{s,t} = X_t - X_s. Additive by construction.
TwoParamField increments_field(const SampledPath& path);

// Largest additivity defect norm over grid triples; exhaustive scan up to
// `exhaustive_cap` grid points, uniform random sample of `sample_count`
// triples beyond that (deterministic seed).
struct DefectScan {
  double max_defect = 0.0;
  bool exhaustive = true;
};
DefectScan max_delta_defect(const TwoParamField& field, std::size_t exhaustive_cap = 512,
                            std::size_t sample_count = 100000, std::uint64_t seed = 0x5eedu);

/**
 * ControlField: nonnegative scalar field omega(s,t), zero on the diagonal,
 * monotone under interval inclusion and superadditive:
 * omega(s,u) + omega(u,t) <= omega(s,t).
 */
class ControlField {
public:
  // Validates on construction; throws when superadditivity or monotonicity
  // fails on a scanned triple/pair (exhaustive below cap, sampled above).
  explicit ControlField(TwoParamField field, double tol = 1e-12,
                        std::size_t exhaustive_cap = 512);

  // For fields superadditive by construction (cumulative sums along the
  // grid); skips the triple scan.
  static ControlField trusted(TwoParamField field);

  const TwoParamField& field() const { return field_; }
  const TimeGrid& grid() const { return field_.grid(); }
  double operator()(std::size_t i, std::size_t j) const { return field_.value(i, j); }

  static ControlField length(const TimeGrid& grid);  // omega(s,t) = t - s

private:
  struct Trusted {};
  ControlField(Trusted, TwoParamField field) : field_(std::move(field)) {}

  TwoParamField field_;
};

// sup{ omega(s,t) : |t-s| <= mesh } over grid pairs.
double control_osc(const ControlField& control, double mesh);

}  // namespace pathbs
