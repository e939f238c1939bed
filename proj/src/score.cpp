#include "crsim/score.hpp"

#include <cmath>

#include "crsim/errors.hpp"
#include "crsim/kernels.hpp"

namespace crsim {

double ScorePmf::mean() const {
  double s = 0;
  for (int l = 1; l <= m; ++l) s += l * probs[static_cast<std::size_t>(l - 1)];
  return s;
}

void discretize(double quality, double sigma, int m, double* out) {
  if (m < 2) throw ValidationError("rating ceiling must be >= 2");
  if (!(quality > 1.0 && quality < static_cast<double>(m)))
    throw ValidationError("quality must lie strictly inside (1, m)");
  if (!(sigma > 0)) throw ValidationError("sigma must be positive");
  double prev = kern::phi((0.5 - quality) / sigma);
  const double hi = kern::phi((m + 0.5 - quality) / sigma);
  const double denom = hi - prev;
  if (!(denom > 0)) throw ModelInfeasible("score range carries no probability mass");
  for (int l = 1; l <= m; ++l) {
    const double cur = kern::phi((l + 0.5 - quality) / sigma);
    out[l - 1] = (cur - prev) / denom;
    prev = cur;
  }
}

std::vector<double> discretize(double quality, double sigma, int m) {
  std::vector<double> p(static_cast<std::size_t>(m));
  discretize(quality, sigma, m, p.data());
  return p;
}

std::pair<double, double> adjust_in_place(double* p, double quality, int m) {
  const int fl = static_cast<int>(quality);  // floor; quality in (1, m) so fl in [1, m-1]
  double mean = 0;
  for (int l = 1; l <= m; ++l) mean += l * p[l - 1];
  double mass_lo = 0, excess_lo = 0;
  for (int l = 1; l <= fl; ++l) {
    mass_lo += p[l - 1];
    excess_lo += p[l - 1] * (mean - l);
  }
  const double mass_hi = 1.0 - mass_lo;
  if (mass_lo <= 0.0 || mass_hi <= 0.0 || excess_lo <= 0.0) {
    // a one-sided pmf can only be unbiased if it already is
    if (std::fabs(quality - mean) <= 1e-12) return {0.0, 0.0};
    throw ModelInfeasible("score adjustment infeasible: no mass to trade against floor(Q)");
  }
  const double alpha = (quality - mean) * mass_lo / excess_lo;
  const double beta = (quality - mean) * mass_hi / excess_lo;
  if (beta > 1.0 + 1e-9 || alpha < -1.0 - 1e-9)
    throw ModelInfeasible("score adjustment infeasible: probabilities leave [0,1]");
  for (int l = 1; l <= fl; ++l) p[l - 1] *= 1.0 - beta;
  for (int l = fl + 1; l <= m; ++l) p[l - 1] *= 1.0 + alpha;
  return {alpha, beta};
}

ScorePmf make_score_pmf(double quality, double sigma, int m) {
  ScorePmf pmf;
  pmf.m = m;
  pmf.quality = quality;
  pmf.sigma = sigma;
  pmf.probs = discretize(quality, sigma, m);
  auto [a, b] = adjust_in_place(pmf.probs.data(), quality, m);
  pmf.alpha = a;
  pmf.beta = b;
  return pmf;
}

std::pair<double, double> score_pmf_from_phi(const double* phi_vals, double quality, int m,
                                             double* out) {
  const double denom = phi_vals[m] - phi_vals[0];
  if (!(denom > 0)) throw ModelInfeasible("score range carries no probability mass");
  for (int l = 1; l <= m; ++l) out[l - 1] = (phi_vals[l] - phi_vals[l - 1]) / denom;
  return adjust_in_place(out, quality, m);
}

int sample_score(const ScorePmf& pmf, RoundRng& rng) {
  return sample_score(pmf.probs.data(), pmf.m, rng.next_unit());
}

std::pair<int, double> matching_to_expertise_critical(double mu, int levels, CriticalMap f) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw ValidationError("matching degree must lie in [0,1]");
  if (levels < 1) throw ValidationError("need at least one expertise level");
  int e = static_cast<int>(mu * levels) + 1;
  if (e > levels) e = levels;  // mu == 1 lands in the top bucket
  const double c = f == CriticalMap::square ? mu * mu : mu;
  return {e, c};
}

double sigma_of_critical(const SigmaPolicy& policy, double critical, bool same_type) {
  switch (policy.kind) {
    case SigmaPolicy::Kind::constant:
      return policy.value;
    case SigmaPolicy::Kind::two_type:
      return same_type ? policy.match : policy.mismatch;
    case SigmaPolicy::Kind::linear_in_critical:
      return policy.base + policy.slope * (1.0 - critical);
  }
  throw ValidationError("unknown sigma policy");
}

int apply_behavior(Behavior b, int honest_score, int m, RoundRng& rng) {
  switch (b) {
    case Behavior::honest:
      return honest_score;
    case Behavior::random_scoring:
      return 1 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(m)));
    case Behavior::bias_scoring:
      // inflate what was judged weak, bury what was judged strong
      return honest_score < 3 ? m : 1;
  }
  throw ValidationError("unknown behavior");
}

}  // namespace crsim
