#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "crsim/quality.hpp"
#include "crsim/rules.hpp"
#include "crsim/score.hpp"

namespace crsim {

struct QualitySource {
  enum class Kind { regime, linear_grid } kind{Kind::regime};
  Selectivity regime{Selectivity::medium};
};

struct MatchingModel {
  enum class Kind { none, two_type, many_type } kind{Kind::none};
  double critical{1.0};             // none: fixed critical degree for every review
  double same_type_fraction{0.5};   // two_type
  int levels{3};                    // many_type expertise buckets
  CriticalMap map{CriticalMap::identity};
};

struct BehaviorMix {
  double random_scoring{0};
  double bias_scoring{0};
};

enum class ReviewStrategy { homogeneous, heterogeneous_two_round };

// Full description of one simulated venue.
struct ScenarioConfig {
  int papers{200};
  int slots{30};
  int rating_levels{5};
  int reviews_per_paper{3};
  ReviewStrategy strategy{ReviewStrategy::homogeneous};
  QualitySource quality;
  VotingRule voting;
  TieBreakRule tiebreak{TieBreakRule::least_variance};
  SigmaPolicy sigma;
  MatchingModel matching;
  BehaviorMix behaviors;
  std::vector<int> metrics{1, 5, 10, 30};  // i values tracked as |top-i ∩ accepted-k|
  std::uint64_t seed{1};

  // Cross-field checks plus a feasibility sweep of the score model over the
  // reachable (quality, sigma) pairs.  Throws ValidationError/ModelInfeasible.
  void validate() const;
  std::uint64_t digest() const;
  // metrics, deduplicated, sorted, with the slot count always present
  std::vector<int> tally_points() const;
};

// Estimates from K simulated rounds.  Everything is integer tallies, so
// reports from disjoint round ranges merge exactly.
struct AccuracyReport {
  std::uint64_t rounds{0};
  std::uint64_t seed{0};
  std::uint64_t config_digest{0};
  int slots{0};
  std::vector<int> tally_points;                   // sorted, contains slots
  std::vector<std::vector<std::uint64_t>> tallies; // tallies[j][v], v in 0..tally_points[j]

  const std::vector<std::uint64_t>& counts() const;  // tallies for i = slots
  std::vector<double> pmf_hat() const;               // counts()/K
  double pmf_stderr(int bin) const;
  double e_hat(int i) const;
  double var_hat(int i) const;
  double e_stderr(int i) const;
  double var_stderr(int i) const;  // asymptotic: sqrt((m4 - m2^2)/K)

 private:
  std::size_t index_of(int i) const;
};

struct RunOptions {
  int workers{0};        // 0: CRSIM_WORKERS env var, then hardware concurrency
  bool progress{false};  // coarse progress lines on stderr
};

// Simulates rounds [0, rounds); deterministic in (config, rounds) regardless
// of worker count.
AccuracyReport run(const ScenarioConfig& config, std::uint64_t rounds,
                   const RunOptions& opts = {});

// Simulates the half-open round range [first, last) on one thread.
AccuracyReport run_rounds(const ScenarioConfig& config, std::uint64_t first,
                          std::uint64_t last);

// Sums tallies of reports produced from the same scenario; equals a single
// run over the union of the (disjoint) round ranges.
AccuracyReport merge_reports(const std::vector<AccuracyReport>& parts);

// Round-count planners for the two Chernoff-style guarantees.
struct GuaranteeSpec {
  double epsilon{0.1};
  double delta{0.05};
  enum class Bound { tight, loose } bound{Bound::tight};
  double p_floor{1.0};  // loose: lower bound on every nonzero pmf entry
  int slots{1};
};

// ceil(3 ln(2(k+1)/delta) / eps^2): additive sqrt(p)-scaled error on every
// pmf entry with confidence 1 - delta
std::uint64_t required_rounds_tight(double epsilon, double delta, int slots);
// ceil(3 ln(2(k+1)/delta) / (p_floor eps^2)): relative error on every entry
std::uint64_t required_rounds_loose(double epsilon, double delta, int slots, double p_floor);
std::uint64_t required_rounds(const GuaranteeSpec& spec);

namespace detail {
// Draws `count` fresh reviews for each listed candidate, appending scores and
// expertise levels to the per-candidate sets.  This is the single review-
// drawing path shared by both review strategies.
void draw_reviews(const ScenarioConfig& config, std::span<const double> qualities,
                  std::span<const int> candidates, int count,
                  std::vector<ReviewSet>& sets, RoundRng& rng);
}  // namespace detail

// Single-round trace for inspection and tests.
struct RoundTrace {
  std::vector<double> qualities;
  std::vector<int> intrinsic_order;    // candidate indices by descending quality
  std::vector<ReviewSet> reviews;      // final review sets (both rounds combined)
  std::vector<int> survivors;          // two-round strategy only; ascending
  std::vector<int> accepted;           // ascending candidate indices
};
RoundTrace trace_round(const ScenarioConfig& config, std::uint64_t round);

}  // namespace crsim
