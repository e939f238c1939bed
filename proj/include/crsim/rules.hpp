#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crsim/rational.hpp"
#include "crsim/rng.hpp"

namespace crsim {

// A candidate's reviews: parallel score/expertise lists.
struct ReviewSet {
  std::vector<int> scores;
  std::vector<int> expertise;  // may be empty unless the weighted rule is used
};

struct VotingRule {
  enum class Kind { average, eliminate_high_low, punish_low, weighted_average };
  Kind kind{Kind::average};
  Rat eta{1, 2};  // penalty per bottom score under punish_low
};

enum class TieBreakRule { random_pick, least_variance, largest_max, largest_min, largest_median };

// Combined score plus the tie-break metadata, all exact.
struct AggregateScore {
  Rat gamma;
  Rat variance;  // population variance of the score multiset
  int max_score{0};
  int min_score{0};
  Rat median;  // lower median
};

// Unnormalized counterpart used on the simulation hot path; comparisons
// cross-multiply, so normalization is cosmetic.
struct RawAggregate {
  long long gnum{0}, gden{1};
  long long vnum{0}, vden{1};
  int max_score{0}, min_score{0};
  int median_low{0};
};

// expertise may be null for rules that ignore it
RawAggregate aggregate_raw(const VotingRule& rule, const int* scores, const int* expertise,
                           int n);
AggregateScore aggregate(const VotingRule& rule, const ReviewSet& reviews);

// negative: prefer a; 0: unordered (fall through to random); positive: prefer b
int tiebreak_compare(TieBreakRule rule, const RawAggregate& a, const RawAggregate& b);
int tiebreak_compare(TieBreakRule rule, const AggregateScore& a, const AggregateScore& b);

// Accepts exactly k candidates: everyone strictly above the k-th score value,
// ties at the boundary resolved by the rule's metadata and then uniformly at
// random.  Returns ascending indices.
std::vector<int> select_top_k(std::span<const RawAggregate> agg, int k, TieBreakRule rule,
                              RoundRng& rng);
std::vector<int> select_top_k(std::span<const AggregateScore> agg, int k, TieBreakRule rule,
                              RoundRng& rng);

// Engine form: fills accepted[i] in {0,1}; order/key buffers are reused
// between rounds.  Draws exactly agg.size() u64 keys from rng.
void select_top_k_into(std::span<const RawAggregate> agg, int k, TieBreakRule rule,
                       RoundRng& rng, std::vector<int>& order_buf,
                       std::vector<std::uint64_t>& key_buf, std::vector<char>& accepted);

}  // namespace crsim
