#pragma once

#include <vector>

#include "crsim/score.hpp"

namespace crsim {

// Distribution of a candidate's average score under n i.i.d. reviews, kept on
// the integer total grid: average = total / n with total in [n, n*m].
struct AvgScorePmf {
  int n{1};
  int m{2};
  std::vector<long double> mass;  // mass[t - n] = Pr[total = t]
  std::vector<long double> cdf;   // cdf[t - n]  = Pr[total <= t], prefix sums of mass

  long double pmf_at(int total) const;
  long double cdf_at(int total) const;  // 0 below the support, 1 above
};

AvgScorePmf avg_score_pmf(const ScorePmf& score, int n);

// Homogeneous instance solvable in closed form: strictly decreasing grid
// qualities, equal review counts, average-score rule, uniform random
// tie-break.  The intrinsic top-k set is {0..k-1} by construction.
struct ExactInstance {
  int papers{0};
  int slots{0};
  int reviews{1};
  int max_rating{2};
  std::vector<ScorePmf> score_pmfs;
  // The closed-form evaluation enumerates all C(N, k) candidate sets, which
  // grows exponentially; refuse instances beyond this many candidates.
  int size_guard{12};

  static ExactInstance special_case(int papers, int slots, int reviews, int max_rating,
                                    double sigma, int size_guard = 12);
};

// Pr[accepted set == target]; target holds |target| = slots candidate indices.
double prob_accept_set(const ExactInstance& inst, const std::vector<int>& target);

// pmf of |top-k-by-quality ∩ accepted-k| over {0..k}
std::vector<double> intersection_pmf_exact(const ExactInstance& inst);

// Independent verification: enumerates every score assignment and resolves
// boundary ties by exact expectation over the uniform tie-break (no
// sampling).  budget caps the elementary step count.
std::vector<double> brute_force_oracle(const ExactInstance& inst, double budget = 1e8);

double pmf_expectation(const std::vector<double>& pmf);
double pmf_variance(const std::vector<double>& pmf);

}  // namespace crsim
