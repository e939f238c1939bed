#pragma once

#include <span>
#include <vector>

#include "crsim/rng.hpp"

namespace crsim {

// Pool-quality regimes: the distribution a candidate's latent quality is
// drawn from, reflecting how selectively authors submit to the venue.
enum class Selectivity { high, medium, low, random };

struct RegimeParams {
  double mean{0};            // undefined when infinite_variance
  double variance{1};
  bool infinite_variance{false};  // uniform limit on (1, m)
};

// mean/variance pair for a regime on the rating scale {1..m}
RegimeParams regime_params(Selectivity s, int m);

// Normal distribution conditioned on (lower, upper); sampling is one uniform
// through the inverse CDF, and results are strictly interior.
class TruncatedNormal {
 public:
  TruncatedNormal(double mean, double variance, double lower, double upper);

  double sample(RoundRng& rng) const { return from_unit(rng.next_unit()); }
  double from_unit(double u) const;

  double mean() const { return mean_; }
  double sigma() const { return sigma_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  // CDF of the truncated law at x
  double cdf(double x) const;

 private:
  double mean_, sigma_, lower_, upper_;
  double cdf_lo_, cdf_span_;
};

// N independent quality draws for the regime, one uniform per candidate.
std::vector<double> sample_qualities(Selectivity s, int n_papers, int m, RoundRng& rng);

// Batch form used by the engine: maps n_papers uniforms (already drawn, in
// candidate order) to qualities.
void qualities_from_units(Selectivity s, int m, std::span<const double> units,
                          std::span<double> out);

// Deterministic strictly decreasing grid: Q_i = m - i(m-1)/(N+1), i = 1..N.
std::vector<double> linear_quality_grid(int n_papers, int m);

}  // namespace crsim
