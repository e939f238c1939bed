#include "crsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "crsim/errors.hpp"
#include "crsim/kernels.hpp"

namespace crsim {

namespace {

// ---- config digest ---------------------------------------------------------

struct Fnv {
  std::uint64_t h{0xCBF29CE484222325ULL};
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001B3ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void i64(long long v) { bytes(&v, sizeof v); }
  void f64(double v) { bytes(&v, sizeof v); }
};

// ---- per-worker scratch ------------------------------------------------------

struct Workspace {
  std::vector<double> units;
  std::vector<double> qualities;
  std::vector<int> intrinsic;
  std::vector<double> args;
  std::vector<double> phiv;
  std::vector<double> pmf;  // pmf blocks, m doubles each
  std::vector<ReviewSet> sets;
  std::vector<char> same_type;  // per review, current draw phase
  std::vector<double> mu;
  std::vector<RawAggregate> agg;
  std::vector<int> order;
  std::vector<std::uint64_t> keys;
  std::vector<char> accepted_local;  // per active candidate
  std::vector<char> accepted;        // per candidate
  std::vector<int> all_cands;
  std::vector<int> survivors;
  std::vector<std::vector<std::uint64_t>> hist;
};

enum class Granularity { per_candidate, per_candidate_two, per_review };

struct EngineCtx {
  const ScenarioConfig& cfg;
  std::vector<int> points;  // tally points, sorted, contains slots
  Granularity gran;
  bool has_behaviors;
  // quality source
  bool grid_source;
  std::vector<double> grid_q;
  std::vector<int> grid_intrinsic;
  // per-candidate pmfs reusable across rounds (grid qualities, fixed sigma)
  std::vector<double> fixed_pmfs;

  explicit EngineCtx(const ScenarioConfig& c) : cfg(c) {
    points = c.tally_points();
    switch (c.sigma.kind) {
      case SigmaPolicy::Kind::two_type:
        gran = Granularity::per_candidate_two;
        break;
      case SigmaPolicy::Kind::linear_in_critical:
        gran = c.matching.kind == MatchingModel::Kind::many_type ? Granularity::per_review
                                                                 : Granularity::per_candidate;
        break;
      default:
        gran = Granularity::per_candidate;
        break;
    }
    has_behaviors = c.behaviors.random_scoring + c.behaviors.bias_scoring > 0;
    grid_source = c.quality.kind == QualitySource::Kind::linear_grid;
    if (grid_source) {
      grid_q = linear_quality_grid(c.papers, c.rating_levels);
      grid_intrinsic.resize(grid_q.size());
      std::iota(grid_intrinsic.begin(), grid_intrinsic.end(), 0);  // grid is decreasing
      if (gran == Granularity::per_candidate) {
        const double s = fixed_sigma();
        fixed_pmfs.resize(grid_q.size() * static_cast<std::size_t>(c.rating_levels));
        for (std::size_t i = 0; i < grid_q.size(); ++i) {
          double* block = fixed_pmfs.data() + i * static_cast<std::size_t>(c.rating_levels);
          discretize(grid_q[i], s, c.rating_levels, block);
          adjust_in_place(block, grid_q[i], c.rating_levels);
        }
      }
    }
  }

  double fixed_sigma() const {
    if (cfg.sigma.kind == SigmaPolicy::Kind::constant) return cfg.sigma.value;
    // linear policy with a fixed critical degree
    return sigma_of_critical(cfg.sigma, cfg.matching.critical, true);
  }
};

// Builds one pmf block per (quality, sigma) pair using the batched CDF
// kernel.  The stride arguments let callers pass broadcast or interleaved
// inputs; out gets m doubles per pair.
void build_pmf_blocks(Workspace& ws, const double* q, const double* sigma,
                      std::size_t stride_q, std::size_t stride_s, std::size_t count, int m,
                      double* out) {
  const std::size_t cols = static_cast<std::size_t>(m) + 1;
  ws.args.resize(count * cols);
  ws.phiv.resize(count * cols);
  for (std::size_t i = 0; i < count; ++i) {
    const double qu = q[i * stride_q];
    const double inv = 1.0 / sigma[i * stride_s];
    for (int l = 0; l <= m; ++l)
      ws.args[i * cols + static_cast<std::size_t>(l)] = (l + 0.5 - qu) * inv;
  }
  kern::phi_batch(ws.args.data(), ws.phiv.data(), count * cols);
  for (std::size_t i = 0; i < count; ++i)
    score_pmf_from_phi(ws.phiv.data() + i * cols, q[i * stride_q], m,
                       out + i * static_cast<std::size_t>(m));
}

int draw_one_score(const ScenarioConfig& cfg, bool has_behaviors, const double* pmf_block,
                   RoundRng& rng) {
  Behavior b = Behavior::honest;
  if (has_behaviors) {
    const double u = rng.next_unit();
    if (u < cfg.behaviors.random_scoring)
      b = Behavior::random_scoring;
    else if (u < cfg.behaviors.random_scoring + cfg.behaviors.bias_scoring)
      b = Behavior::bias_scoring;
  }
  const int honest = sample_score(pmf_block, cfg.rating_levels, rng.next_unit());
  return apply_behavior(b, honest, cfg.rating_levels, rng);
}

// Draw order per phase: matching uniforms for every (candidate, review) pair
// first (candidate-major), then per review a behavior uniform (when any
// anomaly fraction is set), the honest-score uniform, and the random-scoring
// replacement uniform when that behavior was drawn.
void draw_reviews_impl(const EngineCtx& ctx, Workspace& ws, std::span<const double> qualities,
                       std::span<const int> cands, int count, RoundRng& rng) {
  const ScenarioConfig& cfg = ctx.cfg;
  const int m = cfg.rating_levels;
  const std::size_t total = cands.size() * static_cast<std::size_t>(count);

  switch (ctx.gran) {
    case Granularity::per_candidate: {
      const double* blocks;
      if (!ctx.fixed_pmfs.empty()) {
        blocks = ctx.fixed_pmfs.data();  // indexed by candidate id
      } else {
        const double s = ctx.fixed_sigma();
        ws.pmf.resize(cands.size() * static_cast<std::size_t>(m));
        ws.units.resize(cands.size());  // gather qualities of active candidates
        for (std::size_t i = 0; i < cands.size(); ++i)
          ws.units[i] = qualities[static_cast<std::size_t>(cands[i])];
        build_pmf_blocks(ws, ws.units.data(), &s, 1, 0, cands.size(), m, ws.pmf.data());
        blocks = ws.pmf.data();
      }
      for (std::size_t i = 0; i < cands.size(); ++i) {
        const int c = cands[i];
        const double* block =
            !ctx.fixed_pmfs.empty()
                ? blocks + static_cast<std::size_t>(c) * static_cast<std::size_t>(m)
                : blocks + i * static_cast<std::size_t>(m);
        ReviewSet& set = ws.sets[static_cast<std::size_t>(c)];
        const std::size_t base = set.scores.size();
        set.scores.resize(base + static_cast<std::size_t>(count));
        set.expertise.resize(base + static_cast<std::size_t>(count), 1);
        int* dst = set.scores.data() + base;
        for (int j = 0; j < count; ++j)
          dst[j] = draw_one_score(cfg, ctx.has_behaviors, block, rng);
      }
      break;
    }
    case Granularity::per_candidate_two: {
      ws.same_type.resize(total);
      for (std::size_t r = 0; r < total; ++r)
        ws.same_type[r] = rng.next_unit() < cfg.matching.same_type_fraction;
      ws.units.resize(cands.size());
      for (std::size_t i = 0; i < cands.size(); ++i)
        ws.units[i] = qualities[static_cast<std::size_t>(cands[i])];
      // block layout: [matched pmfs for all candidates][mismatched pmfs]
      const std::size_t half = cands.size() * static_cast<std::size_t>(m);
      ws.pmf.resize(2 * half);
      build_pmf_blocks(ws, ws.units.data(), &cfg.sigma.match, 1, 0, cands.size(), m,
                       ws.pmf.data());
      build_pmf_blocks(ws, ws.units.data(), &cfg.sigma.mismatch, 1, 0, cands.size(), m,
                       ws.pmf.data() + half);
      std::size_t r = 0;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        const int c = cands[i];
        ReviewSet& set = ws.sets[static_cast<std::size_t>(c)];
        const std::size_t base = set.scores.size();
        set.scores.resize(base + static_cast<std::size_t>(count));
        set.expertise.resize(base + static_cast<std::size_t>(count), 1);
        int* dst = set.scores.data() + base;
        for (int j = 0; j < count; ++j, ++r) {
          const double* block = ws.pmf.data() + (ws.same_type[r] ? 0 : half) +
                                i * static_cast<std::size_t>(m);
          dst[j] = draw_one_score(cfg, ctx.has_behaviors, block, rng);
        }
      }
      break;
    }
    case Granularity::per_review: {
      ws.mu.resize(total);
      for (std::size_t r = 0; r < total; ++r) ws.mu[r] = rng.next_unit();
      ws.units.resize(total * 2);  // interleaved (quality, sigma) per review
      std::vector<int>& levels = ws.order;  // borrow as temporary expertise store
      levels.resize(total);
      for (std::size_t i = 0, r = 0; i < cands.size(); ++i) {
        const double qu = qualities[static_cast<std::size_t>(cands[i])];
        for (int j = 0; j < count; ++j, ++r) {
          auto [e, crit] =
              matching_to_expertise_critical(ws.mu[r], cfg.matching.levels, cfg.matching.map);
          levels[r] = e;
          ws.units[2 * r] = qu;
          ws.units[2 * r + 1] = sigma_of_critical(cfg.sigma, crit, true);
        }
      }
      ws.pmf.resize(total * static_cast<std::size_t>(m));
      build_pmf_blocks(ws, ws.units.data(), ws.units.data() + 1, 2, 2, total, m,
                       ws.pmf.data());
      std::size_t r = 0;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        const int c = cands[i];
        ReviewSet& set = ws.sets[static_cast<std::size_t>(c)];
        const std::size_t base = set.scores.size();
        set.scores.resize(base + static_cast<std::size_t>(count));
        set.expertise.resize(base + static_cast<std::size_t>(count));
        int* dst = set.scores.data() + base;
        int* edst = set.expertise.data() + base;
        for (int j = 0; j < count; ++j, ++r) {
          const double* block = ws.pmf.data() + r * static_cast<std::size_t>(m);
          dst[j] = draw_one_score(cfg, ctx.has_behaviors, block, rng);
          edst[j] = levels[r];
        }
      }
      break;
    }
  }
}

void aggregate_active(const ScenarioConfig& cfg, Workspace& ws, std::span<const int> cands) {
  ws.agg.resize(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const ReviewSet& set = ws.sets[static_cast<std::size_t>(cands[i])];
    ws.agg[i] = aggregate_raw(cfg.voting, set.scores.data(), set.expertise.data(),
                              static_cast<int>(set.scores.size()));
  }
}

// one simulated round; fills ws.accepted and tallies into ws.hist
void simulate_round(const EngineCtx& ctx, Workspace& ws, std::uint64_t round,
                    RoundTrace* trace) {
  const ScenarioConfig& cfg = ctx.cfg;
  const std::size_t n = static_cast<std::size_t>(cfg.papers);
  RoundRng rng(cfg.seed, round);

  // 1. latent qualities
  std::span<const double> q;
  if (ctx.grid_source) {
    q = ctx.grid_q;
    ws.intrinsic = ctx.grid_intrinsic;
  } else {
    ws.units.resize(n);
    for (auto& u : ws.units) u = rng.next_unit();
    ws.qualities.resize(n);
    qualities_from_units(cfg.quality.regime, cfg.rating_levels, ws.units, ws.qualities);
    q = ws.qualities;
    ws.intrinsic.resize(n);
    std::iota(ws.intrinsic.begin(), ws.intrinsic.end(), 0);
    // ranks are consumed only up to the deepest tracked i (traces get them all)
    const auto mid = trace ? ws.intrinsic.end()
                           : ws.intrinsic.begin() +
                                 std::min<std::ptrdiff_t>(ctx.points.back(),
                                                          ws.intrinsic.size());
    const auto by_quality = [&](int a, int b) {
      const double qa = q[static_cast<std::size_t>(a)], qb = q[static_cast<std::size_t>(b)];
      return qa != qb ? qa > qb : a < b;
    };
    if (mid != ws.intrinsic.end())
      std::nth_element(ws.intrinsic.begin(), mid, ws.intrinsic.end(), by_quality);
    std::sort(ws.intrinsic.begin(), mid, by_quality);
  }

  // 2. review phases and selection
  for (auto& set : ws.sets) {
    set.scores.clear();
    set.expertise.clear();
  }
  ws.all_cands.resize(n);
  std::iota(ws.all_cands.begin(), ws.all_cands.end(), 0);
  ws.accepted.assign(n, 0);

  if (cfg.strategy == ReviewStrategy::homogeneous) {
    draw_reviews_impl(ctx, ws, q, ws.all_cands, cfg.reviews_per_paper, rng);
    aggregate_active(cfg, ws, ws.all_cands);
    select_top_k_into(ws.agg, cfg.slots, cfg.tiebreak, rng, ws.order, ws.keys,
                      ws.accepted_local);
    for (std::size_t i = 0; i < n; ++i) ws.accepted[i] = ws.accepted_local[i];
  } else {
    const int n1 = cfg.reviews_per_paper / 2;
    const int n2 = 2 * ((cfg.reviews_per_paper + 1) / 2);
    const int keep = (cfg.papers + 1) / 2;
    draw_reviews_impl(ctx, ws, q, ws.all_cands, n1, rng);
    aggregate_active(cfg, ws, ws.all_cands);
    select_top_k_into(ws.agg, keep, cfg.tiebreak, rng, ws.order, ws.keys, ws.accepted_local);
    ws.survivors.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (ws.accepted_local[i]) ws.survivors.push_back(static_cast<int>(i));
    draw_reviews_impl(ctx, ws, q, ws.survivors, n2, rng);
    aggregate_active(cfg, ws, ws.survivors);
    select_top_k_into(ws.agg, cfg.slots, cfg.tiebreak, rng, ws.order, ws.keys,
                      ws.accepted_local);
    for (std::size_t i = 0; i < ws.survivors.size(); ++i)
      if (ws.accepted_local[i]) ws.accepted[static_cast<std::size_t>(ws.survivors[i])] = 1;
  }

  // 3. tallies: |top-i by quality ∩ accepted| for each tracked i
  int hit = 0, rank = 0;
  for (std::size_t j = 0; j < ctx.points.size(); ++j) {
    const int point = ctx.points[j];
    for (; rank < point; ++rank)
      hit += ws.accepted[static_cast<std::size_t>(ws.intrinsic[static_cast<std::size_t>(rank)])];
    ++ws.hist[j][static_cast<std::size_t>(hit)];
  }

  if (trace) {
    trace->qualities.assign(q.begin(), q.end());
    trace->intrinsic_order = ws.intrinsic;
    trace->reviews = ws.sets;
    trace->survivors = ws.survivors;
    trace->accepted.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (ws.accepted[i]) trace->accepted.push_back(static_cast<int>(i));
  }
}

Workspace make_workspace(const EngineCtx& ctx) {
  Workspace ws;
  ws.sets.resize(static_cast<std::size_t>(ctx.cfg.papers));
  ws.hist.reserve(ctx.points.size());
  for (int point : ctx.points)
    ws.hist.emplace_back(static_cast<std::size_t>(point) + 1, 0);
  return ws;
}

AccuracyReport report_from_hist(const EngineCtx& ctx, std::uint64_t rounds,
                                std::vector<std::vector<std::uint64_t>> hist) {
  AccuracyReport rep;
  rep.rounds = rounds;
  rep.seed = ctx.cfg.seed;
  rep.config_digest = ctx.cfg.digest();
  rep.slots = ctx.cfg.slots;
  rep.tally_points = ctx.points;
  rep.tallies = std::move(hist);
  return rep;
}

}  // namespace

// ---- ScenarioConfig ----------------------------------------------------------

std::vector<int> ScenarioConfig::tally_points() const {
  std::vector<int> pts = metrics;
  pts.push_back(slots);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void ScenarioConfig::validate() const {
  if (papers < 1) throw ValidationError("papers must be >= 1");
  if (slots < 1 || slots > papers) throw ValidationError("slots must lie in [1, papers]");
  if (rating_levels < 2 || rating_levels > 32)
    throw ValidationError("rating_levels must lie in [2, 32]");
  if (reviews_per_paper < 1 || reviews_per_paper > 30)
    throw ValidationError("reviews_per_paper must lie in [1, 30]");
  if (strategy == ReviewStrategy::heterogeneous_two_round && reviews_per_paper < 2)
    throw ValidationError("the two-round strategy needs reviews_per_paper >= 2");
  if (voting.kind == VotingRule::Kind::eliminate_high_low) {
    const int first_round = strategy == ReviewStrategy::heterogeneous_two_round
                                ? reviews_per_paper / 2
                                : reviews_per_paper;
    if (first_round < 3)
      throw ValidationError(
          "eliminate-high-low needs at least three reviews in every selection round");
  }
  if (voting.kind == VotingRule::Kind::punish_low &&
      (voting.eta.num < 0 || voting.eta.den <= 0 || voting.eta.num > 1000000 ||
       voting.eta.den > 1000000))
    throw ValidationError(
        "punish-low penalty must be a nonnegative rational with parts at most 1e6");
  for (int i : metrics)
    if (i < 1 || i > papers) throw ValidationError("tracked metric i must lie in [1, papers]");
  if (metrics.empty()) throw ValidationError("metrics must name at least one i");
  if (behaviors.random_scoring < 0 || behaviors.bias_scoring < 0 ||
      behaviors.random_scoring + behaviors.bias_scoring > 1.0)
    throw ValidationError("behavior fractions must be nonnegative and sum to at most 1");
  if (matching.kind == MatchingModel::Kind::none &&
      (matching.critical < 0 || matching.critical > 1))
    throw ValidationError("critical degree must lie in [0,1]");
  if (matching.kind == MatchingModel::Kind::two_type &&
      (matching.same_type_fraction < 0 || matching.same_type_fraction > 1))
    throw ValidationError("same-type fraction must lie in [0,1]");
  if (matching.kind == MatchingModel::Kind::many_type && matching.levels < 1)
    throw ValidationError("matching levels must be >= 1");
  switch (sigma.kind) {
    case SigmaPolicy::Kind::constant:
      if (!(sigma.value > 0)) throw ValidationError("sigma must be positive");
      break;
    case SigmaPolicy::Kind::two_type:
      if (!(sigma.match > 0) || !(sigma.mismatch > 0))
        throw ValidationError("two-type sigmas must be positive");
      if (matching.kind != MatchingModel::Kind::two_type)
        throw ValidationError("two-type sigma policy requires two-type matching");
      break;
    case SigmaPolicy::Kind::linear_in_critical:
      if (!(sigma.base > 0) || !(sigma.slope > 0))
        throw ValidationError(
            "critical-linear sigma needs base > 0 and a strictly decreasing profile");
      break;
  }
  if (matching.kind == MatchingModel::Kind::two_type &&
      sigma.kind != SigmaPolicy::Kind::two_type)
    throw ValidationError("two-type matching requires the two-type sigma policy");

  // feasibility sweep of the score adjustment over reachable (Q, sigma) pairs
  std::vector<double> sigmas;
  switch (sigma.kind) {
    case SigmaPolicy::Kind::constant:
      sigmas = {sigma.value};
      break;
    case SigmaPolicy::Kind::two_type:
      sigmas = {sigma.match, sigma.mismatch};
      break;
    case SigmaPolicy::Kind::linear_in_critical:
      if (matching.kind == MatchingModel::Kind::many_type)
        sigmas = {sigma.base, sigma.base + 0.5 * sigma.slope, sigma.base + sigma.slope};
      else
        sigmas = {sigma_of_critical(sigma, matching.critical, true)};
      break;
  }
  std::vector<double> qs;
  if (quality.kind == QualitySource::Kind::linear_grid) {
    qs = linear_quality_grid(papers, rating_levels);
  } else {
    const double lo = 1.0, hi = static_cast<double>(rating_levels);
    const int steps = 4096;
    qs.reserve(static_cast<std::size_t>(steps) + 1);
    qs.push_back(std::nextafter(lo, hi));
    for (int t = 1; t < steps; ++t) qs.push_back(lo + (hi - lo) * t / steps);
    qs.push_back(std::nextafter(hi, lo));
  }
  std::vector<double> buf(static_cast<std::size_t>(rating_levels));
  for (double s : sigmas) {
    for (double qv : qs) {
      try {
        discretize(qv, s, rating_levels, buf.data());
        adjust_in_place(buf.data(), qv, rating_levels);
      } catch (const ModelInfeasible& e) {
        throw ModelInfeasible(std::string(e.what()) + " (at quality " + std::to_string(qv) +
                              ", sigma " + std::to_string(s) + ")");
      }
    }
  }
}

// Only fields active under the chosen variants are hashed, so two configs
// that describe the same scenario share a digest regardless of leftover
// values in unused slots.
std::uint64_t ScenarioConfig::digest() const {
  Fnv f;
  f.i64(papers);
  f.i64(slots);
  f.i64(rating_levels);
  f.i64(reviews_per_paper);
  f.i64(static_cast<long long>(strategy));
  f.i64(static_cast<long long>(quality.kind));
  if (quality.kind == QualitySource::Kind::regime)
    f.i64(static_cast<long long>(quality.regime));
  f.i64(static_cast<long long>(voting.kind));
  if (voting.kind == VotingRule::Kind::punish_low) {
    f.i64(voting.eta.num);
    f.i64(voting.eta.den);
  }
  f.i64(static_cast<long long>(tiebreak));
  f.i64(static_cast<long long>(sigma.kind));
  switch (sigma.kind) {
    case SigmaPolicy::Kind::constant:
      f.f64(sigma.value);
      break;
    case SigmaPolicy::Kind::two_type:
      f.f64(sigma.match);
      f.f64(sigma.mismatch);
      break;
    case SigmaPolicy::Kind::linear_in_critical:
      f.f64(sigma.base);
      f.f64(sigma.slope);
      break;
  }
  f.i64(static_cast<long long>(matching.kind));
  switch (matching.kind) {
    case MatchingModel::Kind::none:
      f.f64(matching.critical);
      break;
    case MatchingModel::Kind::two_type:
      f.f64(matching.same_type_fraction);
      break;
    case MatchingModel::Kind::many_type:
      f.i64(matching.levels);
      f.i64(static_cast<long long>(matching.map));
      break;
  }
  f.f64(behaviors.random_scoring);
  f.f64(behaviors.bias_scoring);
  f.i64(static_cast<long long>(metrics.size()));
  for (int i : metrics) f.i64(i);
  f.u64(seed);
  return f.h;
}

// ---- AccuracyReport ----------------------------------------------------------

std::size_t AccuracyReport::index_of(int i) const {
  for (std::size_t j = 0; j < tally_points.size(); ++j)
    if (tally_points[j] == i) return j;
  throw ValidationError("metric i=" + std::to_string(i) + " was not tracked in this run");
}

const std::vector<std::uint64_t>& AccuracyReport::counts() const {
  return tallies[index_of(slots)];
}

std::vector<double> AccuracyReport::pmf_hat() const {
  const auto& c = counts();
  std::vector<double> p(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    p[i] = static_cast<double>(c[i]) / static_cast<double>(rounds);
  return p;
}

double AccuracyReport::pmf_stderr(int bin) const {
  const auto& c = counts();
  const double p = static_cast<double>(c[static_cast<std::size_t>(bin)]) /
                   static_cast<double>(rounds);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(rounds));
}

double AccuracyReport::e_hat(int i) const {
  const auto& h = tallies[index_of(i)];
  double e = 0;
  for (std::size_t v = 0; v < h.size(); ++v) e += static_cast<double>(v) * h[v];
  return e / static_cast<double>(rounds);
}

double AccuracyReport::var_hat(int i) const {
  const auto& h = tallies[index_of(i)];
  const double e = e_hat(i);
  double acc = 0;
  for (std::size_t v = 0; v < h.size(); ++v) {
    const double d = static_cast<double>(v) - e;
    acc += d * d * h[v];
  }
  return acc / static_cast<double>(rounds);
}

double AccuracyReport::e_stderr(int i) const {
  return std::sqrt(var_hat(i) / static_cast<double>(rounds));
}

double AccuracyReport::var_stderr(int i) const {
  const auto& h = tallies[index_of(i)];
  const double e = e_hat(i);
  double m2 = 0, m4 = 0;
  for (std::size_t v = 0; v < h.size(); ++v) {
    const double d = static_cast<double>(v) - e;
    const double w = static_cast<double>(h[v]) / static_cast<double>(rounds);
    m2 += d * d * w;
    m4 += d * d * d * d * w;
  }
  const double spread = m4 - m2 * m2;
  return spread > 0 ? std::sqrt(spread / static_cast<double>(rounds)) : 0.0;
}

// ---- runners -----------------------------------------------------------------

AccuracyReport run_rounds(const ScenarioConfig& config, std::uint64_t first,
                          std::uint64_t last) {
  config.validate();
  EngineCtx ctx(config);
  Workspace ws = make_workspace(ctx);
  for (std::uint64_t r = first; r < last; ++r) simulate_round(ctx, ws, r, nullptr);
  return report_from_hist(ctx, last - first, std::move(ws.hist));
}

AccuracyReport run(const ScenarioConfig& config, std::uint64_t rounds, const RunOptions& opts) {
  config.validate();
  if (rounds < 1) throw ValidationError("round count must be >= 1");
  EngineCtx ctx(config);
  int workers = opts.workers;
  if (workers <= 0) {
    if (const char* env = std::getenv("CRSIM_WORKERS")) workers = std::atoi(env);
  }
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (static_cast<std::uint64_t>(workers) > rounds) workers = static_cast<int>(rounds);

  std::vector<std::vector<std::vector<std::uint64_t>>> parts(
      static_cast<std::size_t>(workers));
  std::atomic<std::uint64_t> done{0};
  std::atomic<int> finished{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto body = [&](int w) {
    try {
      Workspace ws = make_workspace(ctx);
      const std::uint64_t lo = rounds * static_cast<std::uint64_t>(w) /
                               static_cast<std::uint64_t>(workers);
      const std::uint64_t hi = rounds * (static_cast<std::uint64_t>(w) + 1) /
                               static_cast<std::uint64_t>(workers);
      for (std::uint64_t r = lo; r < hi; ++r) {
        if (failed.load(std::memory_order_relaxed)) break;
        simulate_round(ctx, ws, r, nullptr);
        if (((r - lo) & 0xFFF) == 0xFFF) done.fetch_add(0x1000, std::memory_order_relaxed);
      }
      parts[static_cast<std::size_t>(w)] = std::move(ws.hist);
    } catch (...) {
      std::scoped_lock lk(error_mu);
      if (!first_error) first_error = std::current_exception();
      failed.store(true);
    }
    finished.fetch_add(1, std::memory_order_release);
  };

  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
    if (opts.progress) {
      while (finished.load(std::memory_order_acquire) < workers) {
        const std::uint64_t d = std::min(done.load(std::memory_order_relaxed), rounds);
        std::fprintf(stderr, "\rrounds ~%llu/%llu", static_cast<unsigned long long>(d),
                     static_cast<unsigned long long>(rounds));
        std::fflush(stderr);
        std::this_thread::sleep_for(std::chrono::milliseconds(300));
      }
      std::fprintf(stderr, "\rrounds %llu/%llu\n", static_cast<unsigned long long>(rounds),
                   static_cast<unsigned long long>(rounds));
    }
    for (auto& t : pool) t.join();
  }
  if (failed.load()) std::rethrow_exception(first_error);

  std::vector<std::vector<std::uint64_t>> merged = std::move(parts[0]);
  for (int w = 1; w < workers; ++w)
    for (std::size_t j = 0; j < merged.size(); ++j)
      for (std::size_t v = 0; v < merged[j].size(); ++v)
        merged[j][v] += parts[static_cast<std::size_t>(w)][j][v];
  return report_from_hist(ctx, rounds, std::move(merged));
}

AccuracyReport merge_reports(const std::vector<AccuracyReport>& parts) {
  if (parts.empty()) throw ConfigMismatch("nothing to merge");
  AccuracyReport out = parts.front();
  for (std::size_t p = 1; p < parts.size(); ++p) {
    const AccuracyReport& r = parts[p];
    if (r.config_digest != out.config_digest || r.tally_points != out.tally_points)
      throw ConfigMismatch("reports come from different scenarios");
    out.rounds += r.rounds;
    for (std::size_t j = 0; j < out.tallies.size(); ++j)
      for (std::size_t v = 0; v < out.tallies[j].size(); ++v)
        out.tallies[j][v] += r.tallies[j][v];
  }
  return out;
}

// ---- planners ------------------------------------------------------------------

std::uint64_t required_rounds_tight(double epsilon, double delta, int slots) {
  if (!(epsilon > 0)) throw ValidationError("epsilon must be positive");
  if (!(delta > 0 && delta < 1)) throw ValidationError("delta must lie in (0,1)");
  if (slots < 1) throw ValidationError("slot count must be >= 1");
  const long double v = 3.0L *
                        std::log(2.0L * (static_cast<long double>(slots) + 1.0L) /
                                 static_cast<long double>(delta)) /
                        (static_cast<long double>(epsilon) * static_cast<long double>(epsilon));
  return static_cast<std::uint64_t>(std::ceil(v));
}

std::uint64_t required_rounds_loose(double epsilon, double delta, int slots, double p_floor) {
  if (!(p_floor > 0 && p_floor <= 1)) throw ValidationError("p_floor must lie in (0,1]");
  if (!(epsilon > 0)) throw ValidationError("epsilon must be positive");
  if (!(delta > 0 && delta < 1)) throw ValidationError("delta must lie in (0,1)");
  if (slots < 1) throw ValidationError("slot count must be >= 1");
  const long double v = 3.0L *
                        std::log(2.0L * (static_cast<long double>(slots) + 1.0L) /
                                 static_cast<long double>(delta)) /
                        (static_cast<long double>(p_floor) *
                         static_cast<long double>(epsilon) * static_cast<long double>(epsilon));
  return static_cast<std::uint64_t>(std::ceil(v));
}

std::uint64_t required_rounds(const GuaranteeSpec& spec) {
  return spec.bound == GuaranteeSpec::Bound::tight
             ? required_rounds_tight(spec.epsilon, spec.delta, spec.slots)
             : required_rounds_loose(spec.epsilon, spec.delta, spec.slots, spec.p_floor);
}

// ---- helpers for strategies/tests ----------------------------------------------

namespace detail {
void draw_reviews(const ScenarioConfig& config, std::span<const double> qualities,
                  std::span<const int> candidates, int count, std::vector<ReviewSet>& sets,
                  RoundRng& rng) {
  EngineCtx ctx(config);
  Workspace ws = make_workspace(ctx);
  ws.sets = std::move(sets);
  ws.sets.resize(static_cast<std::size_t>(config.papers));
  draw_reviews_impl(ctx, ws, qualities, candidates, count, rng);
  sets = std::move(ws.sets);
}
}  // namespace detail

RoundTrace trace_round(const ScenarioConfig& config, std::uint64_t round) {
  config.validate();
  EngineCtx ctx(config);
  Workspace ws = make_workspace(ctx);
  RoundTrace trace;
  simulate_round(ctx, ws, round, &trace);
  return trace;
}

}  // namespace crsim
