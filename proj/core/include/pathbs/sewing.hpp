#pragma once

#include "pathbs/field.hpp"
#include "pathbs/pvar.hpp"

namespace pathbs {

/**
 * Result of sewing an approximately additive field: the limit path estimate
 * on the finest refinement of the field's grid, the per-pair error bound
 * |int_s^t Xi - Xi_{s,t}| <= ||dXi||_{w,g} w^g(s,t) / (1 - 2^{1-g}),
 * and the dyadic-coarsening convergence evidence.
 */
struct SewingResult {
  SampledPath integral_path;        // starts at 0, scalar or d-vector
  TwoParamField local_error_bound;  // scalar field of bound values
  double gamma = 0.0;
  double delta_norm = 0.0;          // ||dXi||_{w,gamma} over grid triples
  bool delta_norm_exhaustive = true;
  bool control_perturbed = false;   // omega had zero off-diagonal entries
  std::vector<double> level_values; // terminal sums, coarsest level first
  std::vector<double> level_diffs;  // successive |difference|
  bool converged = true;
};

struct SewingOptions {
  int refinement_levels = 4;
  double atol = 1e-9;
  double rtol = 1e-7;
  std::size_t triple_scan_cap = 512;
  std::size_t triple_samples = 100000;
  bool throw_on_divergence = true;
};

// Sewing map: field must vanish on the diagonal, gamma > 1, and the control
// must dominate the additivity defect (||dXi||_{w,gamma} is computed, not
// assumed). Vector-valued fields are sewn componentwise; the error bound
// controls the Euclidean norm.
SewingResult sew(const TwoParamField& field, const ControlField& control, double gamma,
                 const SewingOptions& options = {});

enum class YoungEvaluation { Adapted, Terminal };

struct YoungParams {
  YoungEvaluation evaluation = YoungEvaluation::Adapted;
  double p = 2.5;  // declared integrator regularity
  double q = 1.0;  // declared integrand regularity; needs 1/p + 1/q > 1
  SewingOptions sewing;
};

// Young integral of H against X via sewing of Xi_{s,t} = H_s X_{s,t}
// (adapted) or H_t X_{s,t} (terminal). H holds covectors against X's
// coordinates; the output is the scalar integral path.
SampledPath young(const SampledPath& H, const SampledPath& X, const YoungParams& params = {});
SewingResult young_detail(const SampledPath& H, const SampledPath& X,
                          const YoungParams& params = {});

/**
 * Gubinelli-controlled integrand: H (covector path), its symmetric
 * derivative H' (matrix path) and the reference trace, with declared
 * exponents p (reference) and q (derivative).
 */
class ControlledPath {
public:
  ControlledPath(SampledPath H, SampledPath H_prime, SampledPath reference, double p, double q,
                 double symmetry_tol = 1e-12);

  const SampledPath& H() const { return H_; }
  const SampledPath& H_prime() const { return H_prime_; }
  const SampledPath& reference() const { return reference_; }
  double p() const { return p_; }
  double q() const { return q_; }
  double pstar() const { return p_ * q_ / (p_ + q_); }

  // R^H_{s,t} = H_{s,t} - H'_s X_{s,t}, computed on demand.
  TwoParamField remainder_field() const;

private:
  SampledPath H_;        // n x d covectors
  SampledPath H_prime_;  // n x d^2 symmetric matrices
  SampledPath reference_;
  double p_;
  double q_;
};

struct RemainderReport {
  TwoParamField remainder_field;
  double pstar_variation = 0.0;
  bool lower_bound = false;
};
RemainderReport remainder_report(const ControlledPath& cp, PVarMode mode = PVarMode::DyadicLowerBound,
                                 std::size_t max_exact_points = 18);

class EnhancedPath;  // enhance.hpp

// Compensated Riemann sums (H,H').(X, XX) sewn against the composite control
// of the approximate-additivity estimate; gamma = 2/p + 1/q must exceed 1.
SampledPath compensated_integral(const ControlledPath& cp, const EnhancedPath& ep,
                                 const SewingOptions& options = {});
SewingResult compensated_integral_detail(const ControlledPath& cp, const EnhancedPath& ep,
                                         const SewingOptions& options = {});

}  // namespace pathbs
