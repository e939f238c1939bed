#pragma once

#include <utility>
#include <vector>

#include "crsim/rng.hpp"

namespace crsim {

// Distribution of a single integer review score on {1..m}: a normal law
// centred on the latent quality, bucketed to the rating scale, then
// mean-corrected by scaling the mass on either side of floor(Q) so that
// E[S] = Q exactly.
struct ScorePmf {
  int m{0};
  std::vector<double> probs;  // probs[l-1] = Pr[S = l]
  double quality{0};
  double sigma{0};
  double alpha{0};  // scale applied above floor(Q):  (1 + alpha)
  double beta{0};   // scale applied at/below floor(Q): (1 - beta)

  double mean() const;
};

// How a reviewer behaves when submitting a score.
enum class Behavior { honest, random_scoring, bias_scoring };

// Maps the reviewer's critical degree (and, for the two-type model, whether
// reviewer and candidate share a type) to the score noise level.
struct SigmaPolicy {
  enum class Kind { constant, two_type, linear_in_critical } kind{Kind::constant};
  double value{1.0};     // constant
  double match{0.5};     // two_type: same type
  double mismatch{2.0};  // two_type: different type
  double base{0.5};      // linear_in_critical: sigma = base + slope * (1 - c)
  double slope{1.5};
};

enum class CriticalMap { identity, square };

// Bucketing step: pmf of the rounded, range-conditioned normal.
// probs[l-1] = [Phi((l+.5-Q)/s) - Phi((l-.5-Q)/s)] / [Phi((m+.5-Q)/s) - Phi((.5-Q)/s)].
void discretize(double quality, double sigma, int m, double* out_probs);
std::vector<double> discretize(double quality, double sigma, int m);

// Mean correction in place; returns {alpha, beta}.  Throws ModelInfeasible
// when one side of floor(Q) carries no mass to trade against.
std::pair<double, double> adjust_in_place(double* probs, double quality, int m);

ScorePmf make_score_pmf(double quality, double sigma, int m);

// Low-level variant used by the engine: boundary CDF values
// phi_vals[l] = Phi((l + 0.5 - Q)/sigma) for l = 0..m are already computed.
std::pair<double, double> score_pmf_from_phi(const double* phi_vals, double quality, int m,
                                             double* out_probs);

// single-uniform inverse-CDF draw
inline int sample_score(const double* probs, int m, double u) {
  double acc = 0;
  for (int l = 1; l < m; ++l) {
    acc += probs[l - 1];
    if (u < acc) return l;
  }
  return m;
}
int sample_score(const ScorePmf& pmf, RoundRng& rng);

// Reviewer type/expertise coupling: expertise bucket of the matching degree
// plus the critical degree c = f(mu).
std::pair<int, double> matching_to_expertise_critical(double mu, int levels, CriticalMap f);

double sigma_of_critical(const SigmaPolicy& policy, double critical, bool same_type = true);

// Overlays the scoring anomaly on an honestly drawn score.
int apply_behavior(Behavior b, int honest_score, int m, RoundRng& rng);

}  // namespace crsim
