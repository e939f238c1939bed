#include "crsim/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "crsim/errors.hpp"
#include "crsim/quality.hpp"

namespace crsim {

namespace {

// compensated accumulator for the alternating-magnitude sums below
struct Kahan {
  long double sum{0}, carry{0};
  void add(long double x) {
    const long double y = x - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

long double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

long double AvgScorePmf::pmf_at(int total) const {
  if (total < n || total > n * m) return 0.0L;
  return mass[static_cast<std::size_t>(total - n)];
}

long double AvgScorePmf::cdf_at(int total) const {
  if (total < n) return 0.0L;
  if (total > n * m) return 1.0L;
  return cdf[static_cast<std::size_t>(total - n)];
}

AvgScorePmf avg_score_pmf(const ScorePmf& score, int n) {
  if (n < 1) throw ValidationError("need at least one review per candidate");
  AvgScorePmf out;
  out.n = n;
  out.m = score.m;
  std::vector<long double> cur{1.0L};  // distribution of the running total, offset = #reviews
  for (int j = 0; j < n; ++j) {
    std::vector<long double> next(cur.size() + static_cast<std::size_t>(score.m) - 1, 0.0L);
    for (std::size_t t = 0; t < cur.size(); ++t) {
      if (cur[t] == 0.0L) continue;
      for (int s = 1; s <= score.m; ++s)
        next[t + static_cast<std::size_t>(s) - 1] += cur[t] * score.probs[s - 1];
    }
    cur = std::move(next);
  }
  out.mass = std::move(cur);
  out.cdf.resize(out.mass.size());
  Kahan acc;
  for (std::size_t i = 0; i < out.mass.size(); ++i) {
    acc.add(out.mass[i]);
    out.cdf[i] = acc.sum;
  }
  return out;
}

ExactInstance ExactInstance::special_case(int papers, int slots, int reviews, int max_rating,
                                          double sigma, int size_guard) {
  ExactInstance inst;
  inst.papers = papers;
  inst.slots = slots;
  inst.reviews = reviews;
  inst.max_rating = max_rating;
  inst.size_guard = size_guard;
  if (slots < 1 || slots > papers) throw ValidationError("slot count must lie in [1, N]");
  for (double q : linear_quality_grid(papers, max_rating))
    inst.score_pmfs.push_back(make_score_pmf(q, sigma, max_rating));
  return inst;
}

namespace {

struct GammaTables {
  int n, m;
  // per candidate: probability at each total and cumulative below it
  std::vector<AvgScorePmf> avg;
};

GammaTables build_tables(const ExactInstance& inst) {
  GammaTables t;
  t.n = inst.reviews;
  t.m = inst.max_rating;
  t.avg.reserve(inst.score_pmfs.size());
  for (const ScorePmf& p : inst.score_pmfs) t.avg.push_back(avg_score_pmf(p, inst.reviews));
  return t;
}

// Pr[accepted == target] given precomputed per-candidate average-score tables.
//
// Split on the boundary value t of the lowest accepted average: either every
// member of the target strictly beats every outsider, or the members tied at
// t (set F) and the outsiders tied at t (set G) go through the uniform
// tie-break, which picks the |F| winners with probability 1/C(|F|+|G|, |F|).
// The sum over subsets is regrouped by (|F|, |G|) via subset-sum polynomials,
// which is an exact rearrangement of the same expansion.
double accept_set_prob(const GammaTables& tab, const std::vector<char>& in_target) {
  const int n_papers = static_cast<int>(in_target.size());
  const int t_lo = tab.n, t_hi = tab.n * tab.m;
  int k = 0;
  for (char c : in_target) k += c;
  const int nk = n_papers - k;

  Kahan total;
  std::vector<long double> above_poly(static_cast<std::size_t>(k) + 1);
  std::vector<long double> below_poly(static_cast<std::size_t>(nk) + 1);
  for (int t = t_lo; t <= t_hi; ++t) {
    // strict dominance: the worst target member sits at t, all others above,
    // every outsider strictly below
    long double ge = 1.0L, gt = 1.0L, below = 1.0L;
    for (int i = 0; i < n_papers; ++i) {
      const AvgScorePmf& a = tab.avg[static_cast<std::size_t>(i)];
      if (in_target[static_cast<std::size_t>(i)]) {
        ge *= 1.0L - a.cdf_at(t - 1);
        gt *= 1.0L - a.cdf_at(t);
      } else {
        below *= a.cdf_at(t - 1);
      }
    }
    total.add((ge - gt) * below);

    // tie contributions at boundary value t
    // above_poly[f]: sum over F subsets of the target with |F| = f of
    //   prod_{F} Pr[gamma = t] * prod_{target\F} Pr[gamma > t]
    std::fill(above_poly.begin(), above_poly.end(), 0.0L);
    std::fill(below_poly.begin(), below_poly.end(), 0.0L);
    above_poly[0] = 1.0L;
    below_poly[0] = 1.0L;
    int fi = 0, gi = 0;
    for (int i = 0; i < n_papers; ++i) {
      const AvgScorePmf& a = tab.avg[static_cast<std::size_t>(i)];
      const long double at = a.pmf_at(t);
      if (in_target[static_cast<std::size_t>(i)]) {
        const long double above = 1.0L - a.cdf_at(t);
        ++fi;
        for (int f = fi; f >= 1; --f)
          above_poly[f] = above_poly[f] * above + above_poly[f - 1] * at;
        above_poly[0] *= above;
      } else {
        const long double under = a.cdf_at(t - 1);
        ++gi;
        for (int g = gi; g >= 1; --g)
          below_poly[g] = below_poly[g] * under + below_poly[g - 1] * at;
        below_poly[0] *= under;
      }
    }
    for (int f = 1; f <= k; ++f)
      for (int g = 1; g <= nk; ++g)
        total.add(above_poly[static_cast<std::size_t>(f)] *
                  below_poly[static_cast<std::size_t>(g)] / binom(f + g, f));
  }
  return static_cast<double>(total.sum);
}

void check_guard(const ExactInstance& inst) {
  if (inst.papers > inst.size_guard)
    throw InstanceTooLarge("closed-form evaluation limited to " +
                           std::to_string(inst.size_guard) + " candidates");
  if (static_cast<int>(inst.score_pmfs.size()) != inst.papers)
    throw ValidationError("instance needs one score distribution per candidate");
}

}  // namespace

double prob_accept_set(const ExactInstance& inst, const std::vector<int>& target) {
  check_guard(inst);
  if (static_cast<int>(target.size()) != inst.slots)
    throw ValidationError("target set must contain exactly k candidates");
  std::vector<char> mask(static_cast<std::size_t>(inst.papers), 0);
  for (int i : target) {
    if (i < 0 || i >= inst.papers || mask[static_cast<std::size_t>(i)])
      throw ValidationError("target set must hold distinct candidate indices");
    mask[static_cast<std::size_t>(i)] = 1;
  }
  return accept_set_prob(build_tables(inst), mask);
}

std::vector<double> intersection_pmf_exact(const ExactInstance& inst) {
  check_guard(inst);
  const GammaTables tab = build_tables(inst);
  const int n = inst.papers, k = inst.slots;
  std::vector<Kahan> pmf(static_cast<std::size_t>(k) + 1);
  // walk every k-subset; bucket by overlap with the intrinsic top k = {0..k-1}
  std::vector<int> sel(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) sel[static_cast<std::size_t>(i)] = i;
  std::vector<char> mask(static_cast<std::size_t>(n));
  while (true) {
    std::fill(mask.begin(), mask.end(), 0);
    int overlap = 0;
    for (int i : sel) {
      mask[static_cast<std::size_t>(i)] = 1;
      overlap += i < k;
    }
    pmf[static_cast<std::size_t>(overlap)].add(accept_set_prob(tab, mask));
    // next combination in lexicographic order
    int pos = k - 1;
    while (pos >= 0 && sel[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++sel[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j)
      sel[static_cast<std::size_t>(j)] = sel[static_cast<std::size_t>(j - 1)] + 1;
  }
  std::vector<double> out(pmf.size());
  for (std::size_t i = 0; i < pmf.size(); ++i) out[i] = static_cast<double>(pmf[i].sum);
  return out;
}

std::vector<double> brute_force_oracle(const ExactInstance& inst, double budget) {
  check_guard(inst);
  const int n_papers = inst.papers, k = inst.slots, n = inst.reviews, m = inst.max_rating;
  const int digits = n_papers * n;
  const double steps = std::pow(static_cast<double>(m), digits) *
                       (static_cast<double>(digits) + 4.0 * n_papers);
  if (steps > budget)
    throw BudgetExceeded("brute-force enumeration would take ~" + std::to_string(steps) +
                         " steps");

  std::vector<Kahan> pmf(static_cast<std::size_t>(k) + 1);
  std::vector<int> digit(static_cast<std::size_t>(digits), 0);  // score - 1 per review
  std::vector<int> totals(static_cast<std::size_t>(n_papers));
  std::vector<int> sorted(static_cast<std::size_t>(n_papers));
  while (true) {
    long double pr = 1.0L;
    for (int i = 0; i < n_papers; ++i) {
      int tot = 0;
      const ScorePmf& sp = inst.score_pmfs[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) {
        const int s = digit[static_cast<std::size_t>(i * n + j)];
        tot += s + 1;
        pr *= sp.probs[static_cast<std::size_t>(s)];
      }
      totals[static_cast<std::size_t>(i)] = tot;
    }
    if (pr > 0.0L) {
      sorted = totals;
      std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end(),
                       std::greater<int>());
      const int thr = sorted[static_cast<std::size_t>(k - 1)];
      int above = 0, tied = 0, top_above = 0, top_tied = 0;
      for (int i = 0; i < n_papers; ++i) {
        const int t = totals[static_cast<std::size_t>(i)];
        if (t > thr) {
          ++above;
          top_above += i < k;
        } else if (t == thr) {
          ++tied;
          top_tied += i < k;
        }
      }
      const int slots = k - above;
      // expected tie-break outcome: accepted tied members of the intrinsic
      // top k follow a hypergeometric draw
      const long double denom = binom(tied, slots);
      for (int j = std::max(0, slots - (tied - top_tied)); j <= std::min(top_tied, slots);
           ++j) {
        const long double w = binom(top_tied, j) * binom(tied - top_tied, slots - j) / denom;
        pmf[static_cast<std::size_t>(top_above + j)].add(pr * w);
      }
    }
    int pos = digits - 1;
    while (pos >= 0 && digit[static_cast<std::size_t>(pos)] == m - 1) {
      digit[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++digit[static_cast<std::size_t>(pos)];
  }
  std::vector<double> out(pmf.size());
  for (std::size_t i = 0; i < pmf.size(); ++i) out[i] = static_cast<double>(pmf[i].sum);
  return out;
}

double pmf_expectation(const std::vector<double>& pmf) {
  double e = 0;
  for (std::size_t i = 0; i < pmf.size(); ++i) e += static_cast<double>(i) * pmf[i];
  return e;
}

double pmf_variance(const std::vector<double>& pmf) {
  const double e = pmf_expectation(pmf);
  double v = 0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    const double d = static_cast<double>(i) - e;
    v += d * d * pmf[i];
  }
  return v;
}

}  // namespace crsim
