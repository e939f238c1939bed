#include "crsim/rules.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "crsim/errors.hpp"

namespace crsim {

namespace {

constexpr int kMaxReviews = 64;

// cross-multiplication with a same-denominator fast path
inline int rat_cmp_fast(long long an, long long ad, long long bn, long long bd) {
  if (ad == bd) return an < bn ? -1 : (an > bn ? 1 : 0);
  return rat_cmp(an, ad, bn, bd);
}

int lower_median(const int* scores, int n) {
  std::array<int, kMaxReviews> buf;
  // insertion sort; review lists are tiny
  for (int i = 0; i < n; ++i) {
    const int v = scores[i];
    int j = i;
    while (j > 0 && buf[static_cast<std::size_t>(j - 1)] > v) {
      buf[static_cast<std::size_t>(j)] = buf[static_cast<std::size_t>(j - 1)];
      --j;
    }
    buf[static_cast<std::size_t>(j)] = v;
  }
  return buf[static_cast<std::size_t>((n - 1) / 2)];
}

}  // namespace

RawAggregate aggregate_raw(const VotingRule& rule, const int* scores, const int* expertise,
                           int n) {
  if (n < 1) throw InsufficientReviews("aggregate needs at least one review");
  if (n > kMaxReviews) throw ValidationError("too many reviews for one candidate");
  long long sum = 0, sumsq = 0;
  int max_s = scores[0], min_s = scores[0], ones = 0;
  for (int j = 0; j < n; ++j) {
    const int s = scores[j];
    sum += s;
    sumsq += static_cast<long long>(s) * s;
    max_s = s > max_s ? s : max_s;
    min_s = s < min_s ? s : min_s;
    ones += s == 1;
  }
  RawAggregate out;
  out.vnum = n * sumsq - sum * sum;
  out.vden = static_cast<long long>(n) * n;
  out.max_score = max_s;
  out.min_score = min_s;
  out.median_low = lower_median(scores, n);
  switch (rule.kind) {
    case VotingRule::Kind::average:
      out.gnum = sum;
      out.gden = n;
      break;
    case VotingRule::Kind::eliminate_high_low:
      if (n < 3)
        throw InsufficientReviews("eliminate-high-low needs at least three reviews");
      out.gnum = sum - max_s - min_s;
      out.gden = n - 2;
      break;
    case VotingRule::Kind::punish_low:
      if (rule.eta.num < 0 || rule.eta.den <= 0)
        throw ValidationError("punish-low penalty must be a nonnegative rational");
      out.gnum = sum * rule.eta.den - rule.eta.num * static_cast<long long>(n) * ones;
      out.gden = static_cast<long long>(n) * rule.eta.den;
      break;
    case VotingRule::Kind::weighted_average: {
      if (expertise == nullptr)
        throw ValidationError("weighted-average needs expertise levels");
      long long wsum = 0, wtot = 0;
      for (int j = 0; j < n; ++j) {
        wsum += static_cast<long long>(scores[j]) * expertise[j];
        wtot += expertise[j];
      }
      if (wtot <= 0) throw ValidationError("weighted-average needs positive total expertise");
      out.gnum = wsum;
      out.gden = wtot;
      break;
    }
  }
  return out;
}

AggregateScore aggregate(const VotingRule& rule, const ReviewSet& reviews) {
  const int n = static_cast<int>(reviews.scores.size());
  if (!reviews.expertise.empty() && reviews.expertise.size() != reviews.scores.size())
    throw ValidationError("scores and expertise lists must have equal length");
  const int* e = reviews.expertise.empty() ? nullptr : reviews.expertise.data();
  const RawAggregate r = aggregate_raw(rule, reviews.scores.data(), e, n);
  return AggregateScore{Rat::of(r.gnum, r.gden), Rat::of(r.vnum, r.vden), r.max_score,
                        r.min_score, Rat::of(r.median_low, 1)};
}

int tiebreak_compare(TieBreakRule rule, const RawAggregate& a, const RawAggregate& b) {
  switch (rule) {
    case TieBreakRule::random_pick:
      return 0;
    case TieBreakRule::least_variance:
      return rat_cmp_fast(a.vnum, a.vden, b.vnum, b.vden);
    case TieBreakRule::largest_max:
      return b.max_score - a.max_score;
    case TieBreakRule::largest_min:
      return b.min_score - a.min_score;
    case TieBreakRule::largest_median:
      return b.median_low - a.median_low;
  }
  throw ValidationError("unknown tie-break rule");
}

int tiebreak_compare(TieBreakRule rule, const AggregateScore& a, const AggregateScore& b) {
  switch (rule) {
    case TieBreakRule::random_pick:
      return 0;
    case TieBreakRule::least_variance:
      return rat_cmp(a.variance.num, a.variance.den, b.variance.num, b.variance.den);
    case TieBreakRule::largest_max:
      return b.max_score - a.max_score;
    case TieBreakRule::largest_min:
      return b.min_score - a.min_score;
    case TieBreakRule::largest_median:
      return rat_cmp(b.median.num, b.median.den, a.median.num, a.median.den);
  }
  throw ValidationError("unknown tie-break rule");
}

void select_top_k_into(std::span<const RawAggregate> agg, int k, TieBreakRule rule,
                       RoundRng& rng, std::vector<int>& order, std::vector<std::uint64_t>& keys,
                       std::vector<char>& accepted) {
  const int n = static_cast<int>(agg.size());
  if (k < 1 || k > n) throw ValidationError("slot count must lie in [1, N]");
  keys.resize(agg.size());
  for (auto& key : keys) key = rng.next_u64();
  order.resize(agg.size());
  std::iota(order.begin(), order.end(), 0);
  const auto better = [&](int ia, int ib) {
    const RawAggregate& a = agg[static_cast<std::size_t>(ia)];
    const RawAggregate& b = agg[static_cast<std::size_t>(ib)];
    const int gc = rat_cmp_fast(a.gnum, a.gden, b.gnum, b.gden);
    if (gc != 0) return gc > 0;  // larger combined score first
    const int tc = tiebreak_compare(rule, a, b);
    if (tc != 0) return tc < 0;
    const auto ka = keys[static_cast<std::size_t>(ia)];
    const auto kb = keys[static_cast<std::size_t>(ib)];
    if (ka != kb) return ka < kb;
    return ia < ib;
  };
  // the comparator is a total order, so the accepted set is unique and a
  // partial selection matches a full sort
  if (k < n) {
    std::nth_element(order.begin(), order.begin() + k, order.end(), better);
  }
  accepted.assign(agg.size(), 0);
  for (int r = 0; r < k; ++r) accepted[static_cast<std::size_t>(order[r])] = 1;
}

std::vector<int> select_top_k(std::span<const RawAggregate> agg, int k, TieBreakRule rule,
                              RoundRng& rng) {
  std::vector<int> order;
  std::vector<std::uint64_t> keys;
  std::vector<char> accepted;
  select_top_k_into(agg, k, rule, rng, order, keys, accepted);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < static_cast<int>(agg.size()); ++i)
    if (accepted[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

std::vector<int> select_top_k(std::span<const AggregateScore> agg, int k, TieBreakRule rule,
                              RoundRng& rng) {
  std::vector<RawAggregate> raw(agg.size());
  for (std::size_t i = 0; i < agg.size(); ++i) {
    const AggregateScore& a = agg[i];
    raw[i] = RawAggregate{a.gamma.num,
                          a.gamma.den,
                          a.variance.num,
                          a.variance.den,
                          a.max_score,
                          a.min_score,
                          static_cast<int>(a.median.num / a.median.den)};
  }
  return select_top_k(std::span<const RawAggregate>(raw), k, rule, rng);
}

}  // namespace crsim
