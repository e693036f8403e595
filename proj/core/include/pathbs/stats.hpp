#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pathbs {

double normal_pdf(double x);
double normal_cdf(double x);
// Wichura AS241-grade inverse normal CDF, |error| < 1e-13 on (0,1).
double normal_icdf(double p);

struct MomentSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;  // approx sqrt(2/n) sigma^2 under normality
};
MomentSummary summarize(const std::vector<double>& sample);

double sample_covariance(const std::vector<double>& a, const std::vector<double>& b);

// Asymptotic Kolmogorov distribution Q(lambda) = P(sqrt(n) D_n > lambda).
double kolmogorov_tail(double lambda);

struct KsResult {
  double statistic = 0.0;  // sup |F_n - F|
  double p_value = 1.0;
  std::size_t n = 0;
};
// One-sample KS test against a continuous CDF; requires n >= 1000 so the
// asymptotic p-value is trustworthy.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf,
                 std::size_t min_n = 1000);

struct JarqueBeraResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
JarqueBeraResult jarque_bera(const std::vector<double>& sample);

// Adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                 int max_depth = 48);

}  // namespace pathbs
