#pragma once

#include <string>

#include "pathbs/field.hpp"

namespace pathbs {

/**
 * Local volatility coefficient a(x) >= floor > 0:
 *   Constant      a(x) = level
 *   BlackScholes  a(x) = sigma^2 x^2
 *   Cev           a(x) = sigma^2 x^(2 beta)
 *   Table         linear interpolation of (x, a) samples, flat extrapolation
 */
class LocalVolSpec {
public:
  enum class Kind { Constant, BlackScholes, Cev, Table };

  static LocalVolSpec constant(double level, double alpha = 1.0);
  static LocalVolSpec black_scholes(double sigma, double alpha = 1.0);
  static LocalVolSpec cev(double sigma, double beta, double alpha = 1.0);
  static LocalVolSpec table(std::vector<double> x, std::vector<double> a, double alpha);

  Kind kind() const { return kind_; }
  double holder_alpha() const { return alpha_; }
  double ellipticity_floor() const { return floor_; }
  void set_ellipticity_floor(double c);

  // a(x); throws when the value dips below the ellipticity floor.
  double operator()(double x) const;
  bool extrapolated(double x) const;  // table kind, x outside sample range

  double sigma() const { return sigma_; }
  // Log-space volatility scale sqrt(a(x))/x at a reference level; used for
  // PDE domain sizing.
  double reference_sigma(double x_ref) const;

private:
  Kind kind_ = Kind::Constant;
  double sigma_ = 0.0;   // BS / CEV coefficient
  double beta_ = 1.0;    // CEV exponent
  double level_ = 0.0;   // constant kind
  double alpha_ = 1.0;   // declared Holder exponent in (0,1]
  double floor_ = 1e-12;
  std::vector<double> tx_, ta_;
};

/**
 * EnhancedPath: trace path plus additive symmetric bracket field; the
 * second-order process is derived as 2 XX_{s,t} = X_{s,t} (x) X_{s,t} - [X]_{s,t}.
 */
class EnhancedPath {
public:
  // Bracket must be an additive symmetric matrix field on the trace's grid.
  EnhancedPath(SampledPath trace, TwoParamField bracket, double additivity_tol = 1e-10);

  const SampledPath& trace() const { return trace_; }
  const TwoParamField& bracket() const { return bracket_; }
  std::size_t dimension() const { return trace_.dimension(); }
  const TimeGrid& grid() const { return trace_.grid(); }

  // 2 XX_{s,t} = X_{s,t} (x) X_{s,t} - [X]_{s,t}; row-major d x d entry.
  std::vector<double> second_order(std::size_t i, std::size_t j) const;
  TwoParamField second_order_field() const;

  EnhancedPath coarsen(std::size_t stride) const;

private:
  SampledPath trace_;
  TwoParamField bracket_;
};

enum class PriceCoordinates { Discounted, Undiscounted };

// Diffusion-type enhancement: bracket by trapezoidal quadrature of a(X_t)
// (discounted) or e^{2rt} a(e^{-rt} S_t) (undiscounted), additive through
// cumulative sums. d = 1 for non-constant vol kinds.
EnhancedPath diffusion_enhance(const SampledPath& path, const LocalVolSpec& vol, double r,
                               PriceCoordinates coordinates);

// Realized quadratic covariation on a coarse grid nested in the path's grid:
// [X]est_{s,t} = sum over fine cells of X_{u,u'} (x) X_{u,u'}.
TwoParamField realized_bracket(const SampledPath& path, const TimeGrid& coarse);

// [a] - [b] for identical traces; additive and symmetric.
TwoParamField bracket_diff(const EnhancedPath& a, const EnhancedPath& b);

// Two-file CSV serialization: trace in path format, bracket keyed by (i,j).
void write_enhanced_csv(const std::string& trace_file, const std::string& bracket_file,
                        const EnhancedPath& ep);
EnhancedPath read_enhanced_csv(const std::string& trace_file, const std::string& bracket_file);

}  // namespace pathbs
