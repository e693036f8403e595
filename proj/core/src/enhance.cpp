#include "pathbs/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathbs {

LocalVolSpec LocalVolSpec::constant(double level, double alpha) {
  if (!(level > 0.0)) throw std::invalid_argument("LocalVolSpec: level must be positive");
  LocalVolSpec v;
  v.kind_ = Kind::Constant;
  v.level_ = level;
  v.alpha_ = alpha;
  return v;
}

LocalVolSpec LocalVolSpec::black_scholes(double sigma, double alpha) {
  if (!(sigma > 0.0)) throw std::invalid_argument("LocalVolSpec: sigma must be positive");
  LocalVolSpec v;
  v.kind_ = Kind::BlackScholes;
  v.sigma_ = sigma;
  v.alpha_ = alpha;
  return v;
}

LocalVolSpec LocalVolSpec::cev(double sigma, double beta, double alpha) {
  if (!(sigma > 0.0) || !(beta > 0.0)) throw std::invalid_argument("LocalVolSpec: bad CEV params");
  LocalVolSpec v;
  v.kind_ = Kind::Cev;
  v.sigma_ = sigma;
  v.beta_ = beta;
  v.alpha_ = alpha;
  return v;
}

LocalVolSpec LocalVolSpec::table(std::vector<double> x, std::vector<double> a, double alpha) {
  if (x.size() != a.size() || x.size() < 2)
    throw std::invalid_argument("LocalVolSpec: table needs >= 2 samples");
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1])) throw std::invalid_argument("LocalVolSpec: table x not increasing");
  for (double v : a)
    if (!(v > 0.0)) throw std::invalid_argument("LocalVolSpec: table values must be positive");
  LocalVolSpec v;
  v.kind_ = Kind::Table;
  v.tx_ = std::move(x);
  v.ta_ = std::move(a);
  v.alpha_ = alpha;
  return v;
}

void LocalVolSpec::set_ellipticity_floor(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("LocalVolSpec: floor must be positive");
  floor_ = c;
}

double LocalVolSpec::operator()(double x) const {
  double a = 0.0;
  switch (kind_) {
    case Kind::Constant: a = level_; break;
    case Kind::BlackScholes: a = sigma_ * sigma_ * x * x; break;
    case Kind::Cev: a = sigma_ * sigma_ * std::pow(x, 2.0 * beta_); break;
    case Kind::Table: {
      if (x <= tx_.front()) { a = ta_.front(); break; }
      if (x >= tx_.back()) { a = ta_.back(); break; }
      const auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
      const std::size_t j = static_cast<std::size_t>(it - tx_.begin());
      const double w = (x - tx_[j - 1]) / (tx_[j] - tx_[j - 1]);
      a = (1.0 - w) * ta_[j - 1] + w * ta_[j];
      break;
    }
  }
  if (!(a >= floor_))
    throw std::domain_error("LocalVolSpec: ellipticity violation at x=" + std::to_string(x));
  return a;
}

bool LocalVolSpec::extrapolated(double x) const {
  return kind_ == Kind::Table && (x < tx_.front() || x > tx_.back());
}

double LocalVolSpec::reference_sigma(double x_ref) const {
  if (!(x_ref > 0.0)) throw std::invalid_argument("reference_sigma: x_ref must be positive");
  return std::sqrt((*this)(x_ref)) / x_ref;
}

EnhancedPath::EnhancedPath(SampledPath trace, TwoParamField bracket, double additivity_tol)
    : trace_(std::move(trace)), bracket_(std::move(bracket)) {
  const std::size_t d = trace_.dimension();
  if (!(bracket_.grid() == trace_.grid()))
    throw std::invalid_argument("EnhancedPath: bracket grid must match trace grid");
  if (bracket_.shape() != FieldShape::Matrix || bracket_.dimension() != d)
    throw std::invalid_argument("EnhancedPath: bracket must be a d x d matrix field");
  bracket_.check_finite();
  const std::size_t n = trace_.size();
  // symmetry and additivity (consecutive triples suffice for cumulative fields)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n && j <= i + 1; ++j) {
      const auto e = bracket_.at(i, j);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b)
          if (std::fabs(e[a * d + b] - e[b * d + a]) > additivity_tol * (1.0 + std::fabs(e[a * d + b])))
            throw std::invalid_argument("EnhancedPath: bracket not symmetric");
    }
  for (std::size_t i = 0; i + 2 < n; i += std::max<std::size_t>(1, n / 64)) {
    const std::size_t k = i + 1, j = std::min(i + 2, n - 1);
    const double defect = delta_defect_norm_idx(bracket_, i, k, j);
    if (defect > additivity_tol * (1.0 + bracket_.norm(i, j)))
      throw std::invalid_argument("EnhancedPath: bracket not additive");
  }
}

std::vector<double> EnhancedPath::second_order(std::size_t i, std::size_t j) const {
  const std::size_t d = trace_.dimension();
  std::vector<double> out(d * d);
  const auto br = bracket_.at(i, j);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const double inc = (trace_.at(j, a) - trace_.at(i, a)) * (trace_.at(j, b) - trace_.at(i, b));
      out[a * d + b] = 0.5 * (inc - br[a * d + b]);
    }
  return out;
}

TwoParamField EnhancedPath::second_order_field() const {
  const std::size_t d = trace_.dimension();
  const std::size_t n = trace_.size();
  TwoParamField out(trace_.grid(), FieldShape::Matrix, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const auto v = second_order(i, j);
      auto e = out.at(i, j);
      for (std::size_t c = 0; c < d * d; ++c) e[c] = v[c];
    }
  return out;
}

EnhancedPath EnhancedPath::coarsen(std::size_t stride) const {
  return EnhancedPath(trace_.coarsen(stride), bracket_.coarsen(stride));
}

EnhancedPath diffusion_enhance(const SampledPath& path, const LocalVolSpec& vol, double r,
                               PriceCoordinates coordinates) {
  if (r < 0.0) throw std::invalid_argument("diffusion_enhance: r must be nonnegative");
  const std::size_t d = path.dimension();
  if (d != 1 && vol.kind() != LocalVolSpec::Kind::Constant)
    throw std::invalid_argument("diffusion_enhance: non-constant vol requires d = 1");
  const auto& g = path.grid();
  const std::size_t n = g.size();

  // integrand a(X_t) in discounted coordinates, e^{2rt} a(e^{-rt} S_t) undiscounted
  std::vector<double> integrand(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (coordinates == PriceCoordinates::Discounted) {
      integrand[k] = vol(path.at(k, 0));
    } else {
      const double t = g[k];
      integrand[k] = std::exp(2.0 * r * t) * vol(std::exp(-r * t) * path.at(k, 0));
    }
  }
  std::vector<double> cum(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k)
    cum[k + 1] = cum[k] + 0.5 * (integrand[k] + integrand[k + 1]) * (g[k + 1] - g[k]);

  TwoParamField bracket(g, FieldShape::Matrix, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      auto e = bracket.at(i, j);
      for (std::size_t a = 0; a < d; ++a) e[a * d + a] = cum[j] - cum[i];
    }
  return EnhancedPath(path, std::move(bracket));
}

TwoParamField realized_bracket(const SampledPath& path, const TimeGrid& coarse) {
  const auto& fine = path.grid();
  if (!fine.refines(coarse))
    throw std::invalid_argument("realized_bracket: coarse grid not nested in path grid");
  const std::size_t d = path.dimension();
  const std::size_t nf = fine.size();

  // cumulative sum of X_{u,u'} (x) X_{u,u'} over fine cells
  std::vector<double> cum(nf * d * d, 0.0);
  for (std::size_t k = 0; k + 1 < nf; ++k)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        const double inc = (path.at(k + 1, a) - path.at(k, a)) * (path.at(k + 1, b) - path.at(k, b));
        cum[(k + 1) * d * d + a * d + b] = cum[k * d * d + a * d + b] + inc;
      }

  const std::size_t nc = coarse.size();
  TwoParamField out(coarse, FieldShape::Matrix, d);
  std::vector<std::size_t> map(nc);
  for (std::size_t i = 0; i < nc; ++i) map[i] = fine.index_of(coarse[i]);
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = i; j < nc; ++j) {
      auto e = out.at(i, j);
      for (std::size_t c = 0; c < d * d; ++c)
        e[c] = cum[map[j] * d * d + c] - cum[map[i] * d * d + c];
    }
  return out;
}

TwoParamField bracket_diff(const EnhancedPath& a, const EnhancedPath& b) {
  if (!(a.grid() == b.grid()) || a.dimension() != b.dimension())
    throw std::invalid_argument("bracket_diff: trace mismatch");
  for (std::size_t k = 0; k < a.trace().size(); ++k)
    for (std::size_t c = 0; c < a.dimension(); ++c)
      if (a.trace().at(k, c) != b.trace().at(k, c))
        throw std::invalid_argument("bracket_diff: trace values differ");
  const std::size_t n = a.grid().size();
  const std::size_t comp = a.bracket().components();
  TwoParamField out(a.grid(), FieldShape::Matrix, a.dimension());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      auto e = out.at(i, j);
      const auto ea = a.bracket().at(i, j);
      const auto eb = b.bracket().at(i, j);
      for (std::size_t c = 0; c < comp; ++c) e[c] = ea[c] - eb[c];
    }
  return out;
}

}  // namespace pathbs
