#pragma once

#include "pathbs/field.hpp"

namespace pathbs {

enum class PVarMode { Exact, DyadicLowerBound };

struct PVarResult {
  double value = 0.0;       // sup (or best found) of sum |Xi_{u,u'}|^p
  double norm = 0.0;        // value^(1/p)
  bool lower_bound = false; // true in dyadic mode
};

/**
 * p-variation of a two-parameter field: sup over sub-partitions of the grid
 * of sum |Xi_{u,u'}|^p (vector/matrix entries reduced by Euclidean norm).
 * Exact mode runs the O(n^2) endpoint DP and requires grid length <=
 * max_exact_points; dyadic mode evaluates the full grid and its dyadic
 * coarsenings and returns the best value found, flagged as a lower bound.
 */
PVarResult p_variation(const TwoParamField& field, double p, PVarMode mode,
                       std::size_t max_exact_points = 18);

// p-variation over the index window [lo, hi] of the grid.
PVarResult p_variation_window(const TwoParamField& field, double p, PVarMode mode,
                              std::size_t lo, std::size_t hi,
                              std::size_t max_exact_points = 18);

/**
 * Grid variation control omega(s,t) = sum over grid cells inside [s,t] of
 * |Xi_{u,u'}|^p. Superadditive and interval-monotone by construction (it is
 * additive along grid points), and a lower bound for the exact p-variation.
 * This is the workhorse control behind the sewing bounds at scale.
 */
ControlField cell_sum_control(const TwoParamField& field, double p);

// omega(s,t) = cell-sum p-variation of X plus |t-s|; the default path control.
ControlField path_control(const SampledPath& path, double p);

// Pointwise combination c1*a^e1 * b^e2 etc. are built inline where needed;
// this helper adds two controls with nonnegative coefficients.
ControlField combine_controls(const ControlField& a, double ca, const ControlField& b, double cb);

}  // namespace pathbs
