#include "crsim/quality.hpp"

#include <cmath>

#include "crsim/errors.hpp"
#include "crsim/kernels.hpp"

namespace crsim {

RegimeParams regime_params(Selectivity s, int m) {
  if (m < 2) throw ValidationError("rating ceiling must be >= 2");
  switch (s) {
    case Selectivity::high:
      return {static_cast<double>(m), 1.0, false};
    case Selectivity::medium:
      return {(m + 1) / 2.0, 1.0, false};
    case Selectivity::low:
      return {1.0, 1.0, false};
    case Selectivity::random:
      return {0.0, 0.0, true};
  }
  throw ValidationError("unknown selectivity regime");
}

TruncatedNormal::TruncatedNormal(double mean, double variance, double lower, double upper)
    : mean_(mean), sigma_(std::sqrt(variance)), lower_(lower), upper_(upper) {
  if (!(variance > 0)) throw ValidationError("truncated normal needs variance > 0");
  if (!(lower < upper)) throw ValidationError("truncated normal needs lower < upper");
  cdf_lo_ = kern::phi((lower_ - mean_) / sigma_);
  cdf_span_ = kern::phi((upper_ - mean_) / sigma_) - cdf_lo_;
  if (!(cdf_span_ > 0)) throw ModelInfeasible("truncation interval carries no mass");
}

double TruncatedNormal::from_unit(double u) const {
  double x = mean_ + sigma_ * kern::inv_phi(cdf_lo_ + u * cdf_span_);
  // boundary values are rejected exactly; interior is open
  if (x <= lower_) x = std::nextafter(lower_, upper_);
  if (x >= upper_) x = std::nextafter(upper_, lower_);
  return x;
}

double TruncatedNormal::cdf(double x) const {
  if (x <= lower_) return 0.0;
  if (x >= upper_) return 1.0;
  return (kern::phi((x - mean_) / sigma_) - cdf_lo_) / cdf_span_;
}

std::vector<double> sample_qualities(Selectivity s, int n_papers, int m, RoundRng& rng) {
  std::vector<double> units(static_cast<std::size_t>(n_papers));
  for (auto& u : units) u = rng.next_unit();
  std::vector<double> out(static_cast<std::size_t>(n_papers));
  qualities_from_units(s, m, units, out);
  return out;
}

void qualities_from_units(Selectivity s, int m, std::span<const double> units,
                          std::span<double> out) {
  const std::size_t n = units.size();
  const double lo = 1.0, hi = static_cast<double>(m);
  if (s == Selectivity::random) {
    for (std::size_t i = 0; i < n; ++i) {
      double x = lo + (hi - lo) * units[i];
      if (x <= lo) x = std::nextafter(lo, hi);
      if (x >= hi) x = std::nextafter(hi, lo);
      out[i] = x;
    }
    return;
  }
  const RegimeParams rp = regime_params(s, m);
  const double sigma = std::sqrt(rp.variance);
  const double cdf_lo = kern::phi((lo - rp.mean) / sigma);
  const double span = kern::phi((hi - rp.mean) / sigma) - cdf_lo;
  // map u -> p, run the batched quantile, then affine back
  for (std::size_t i = 0; i < n; ++i) out[i] = cdf_lo + units[i] * span;
  kern::inv_phi_batch(out.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = rp.mean + sigma * out[i];
    if (x <= lo) x = std::nextafter(lo, hi);
    if (x >= hi) x = std::nextafter(hi, lo);
    out[i] = x;
  }
}

std::vector<double> linear_quality_grid(int n_papers, int m) {
  if (n_papers < 1) throw ValidationError("need at least one candidate");
  if (m < 2) throw ValidationError("rating ceiling must be >= 2");
  std::vector<double> q(static_cast<std::size_t>(n_papers));
  for (int i = 1; i <= n_papers; ++i)
    q[static_cast<std::size_t>(i - 1)] = m - static_cast<double>(i) * (m - 1) / (n_papers + 1);
  return q;
}

}  // namespace crsim
