#include <cmath>
#include <numeric>

#include <doctest.h>

#include "crsim/engine.hpp"
#include "crsim/errors.hpp"
#include "crsim/exact.hpp"

using namespace crsim;

namespace {

ScenarioConfig small_grid_config() {
  ScenarioConfig c;
  c.papers = 4;
  c.slots = 2;
  c.rating_levels = 3;
  c.reviews_per_paper = 2;
  c.quality = {QualitySource::Kind::linear_grid, Selectivity::medium};
  c.voting.kind = VotingRule::Kind::average;
  c.tiebreak = TieBreakRule::random_pick;
  c.sigma = {SigmaPolicy::Kind::constant, 1.0, 0, 0, 0, 0};
  c.metrics = {1, 2};
  c.seed = 77;
  return c;
}

ScenarioConfig venue_config(Selectivity regime, int n) {
  ScenarioConfig c;
  c.papers = 60;
  c.slots = 10;
  c.rating_levels = 5;
  c.reviews_per_paper = n;
  c.quality = {QualitySource::Kind::regime, regime};
  c.voting.kind = VotingRule::Kind::average;
  c.tiebreak = TieBreakRule::least_variance;
  c.sigma = {SigmaPolicy::Kind::constant, 1.0, 0, 0, 0, 0};
  c.metrics = {1, 5, 10};
  c.seed = 123;
  return c;
}

bool reports_equal(const AccuracyReport& a, const AccuracyReport& b) {
  return a.rounds == b.rounds && a.config_digest == b.config_digest &&
         a.tally_points == b.tally_points && a.tallies == b.tallies;
}

}  // namespace

TEST_CASE("per-round streams are reproducible and distinct") {
  RoundRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool all_equal_c = true, all_equal_d = true;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    all_equal_c = all_equal_c && va == c.next_u64();
    all_equal_d = all_equal_d && va == d.next_u64();
  }
  CHECK_FALSE(all_equal_c);
  CHECK_FALSE(all_equal_d);
  RoundRng u(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.next_unit();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(u.next_below(7) < 7);
  }
}

TEST_CASE("identical runs are identical; worker count never matters") {
  const ScenarioConfig c = venue_config(Selectivity::medium, 3);
  const AccuracyReport r1 = run(c, 2000, {.workers = 1, .progress = false});
  const AccuracyReport r2 = run(c, 2000, {.workers = 1, .progress = false});
  const AccuracyReport r8 = run(c, 2000, {.workers = 8, .progress = false});
  const AccuracyReport r3 = run(c, 2000, {.workers = 3, .progress = false});
  CHECK(reports_equal(r1, r2));
  CHECK(reports_equal(r1, r8));
  CHECK(reports_equal(r1, r3));
  std::uint64_t total = 0;
  for (std::uint64_t v : r1.counts()) total += v;
  CHECK(total == r1.rounds);  // pmf_hat sums to exactly 1 in rational form
}

TEST_CASE("merge of split ranges equals the whole run") {
  const ScenarioConfig c = venue_config(Selectivity::low, 2);
  const AccuracyReport whole = run_rounds(c, 0, 1500);
  const AccuracyReport left = run_rounds(c, 0, 700);
  const AccuracyReport right = run_rounds(c, 700, 1500);
  const AccuracyReport merged = merge_reports({left, right});
  CHECK(reports_equal(whole, merged));
  CHECK(reports_equal(left, merge_reports({left})));  // identity
}

TEST_CASE("merging different scenarios is rejected") {
  const ScenarioConfig a = venue_config(Selectivity::low, 2);
  ScenarioConfig b = a;
  b.seed += 1;
  const AccuracyReport ra = run_rounds(a, 0, 50);
  const AccuracyReport rb = run_rounds(b, 0, 50);
  CHECK_THROWS_AS(merge_reports({ra, rb}), ConfigMismatch);
}

TEST_CASE("near-deterministic scores keep the true ranking") {
  // integer grid qualities (4, 3, 2) make tiny-noise reviews effectively exact
  ScenarioConfig c;
  c.papers = 3;
  c.slots = 2;
  c.rating_levels = 5;
  c.reviews_per_paper = 3;
  c.quality = {QualitySource::Kind::linear_grid, Selectivity::medium};
  c.voting.kind = VotingRule::Kind::average;
  c.tiebreak = TieBreakRule::random_pick;
  c.sigma = {SigmaPolicy::Kind::constant, 0.01, 0, 0, 0, 0};
  c.metrics = {1, 2};
  c.seed = 5;
  const AccuracyReport rep = run(c, 10000, {.workers = 2, .progress = false});
  CHECK(rep.pmf_hat()[2] >= 0.999);
  CHECK(rep.e_hat(1) >= 0.999);
}

TEST_CASE("estimator matches the closed form on the small grid instance") {
  const ScenarioConfig c = small_grid_config();
  const ExactInstance inst = ExactInstance::special_case(4, 2, 2, 3, 1.0);
  const auto want = intersection_pmf_exact(inst);
  const AccuracyReport rep = run(c, 400000, {.workers = 2, .progress = false});
  const auto got = rep.pmf_hat();
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double se = std::sqrt(want[i] * (1 - want[i]) / static_cast<double>(rep.rounds));
    CHECK(std::fabs(got[i] - want[i]) <= 4 * se);
  }
  // E[I_1] from the tallies stays within its own basic bounds
  CHECK(rep.e_hat(1) >= 0.0);
  CHECK(rep.e_hat(1) <= 1.0);
  CHECK(rep.var_hat(2) >= 0.0);
}

TEST_CASE("guarantee planners: frozen closed-form values") {
  // ceil(3 ln(2(k+1)/delta) / eps^2), evaluated independently at high precision
  CHECK(required_rounds_tight(0.01, 0.05, 30) == 213686ULL);
  CHECK(required_rounds_tight(0.1, 0.05, 30) == 2137ULL);
  CHECK(required_rounds_tight(0.01, 0.01, 2) == 191908ULL);
  CHECK(required_rounds_tight(0.05, 0.1, 2) == 4914ULL);
  // the loose bound at a unit floor reduces to the tight bound
  for (double eps : {0.01, 0.05, 0.1})
    for (double delta : {0.01, 0.05, 0.2})
      for (int k : {1, 2, 30, 100})
        CHECK(required_rounds_loose(eps, delta, k, 1.0) ==
              required_rounds_tight(eps, delta, k));
  // halving the floor doubles the rounds (up to ceiling slack)
  const auto full = required_rounds_loose(0.1, 0.05, 30, 0.5);
  const auto half = required_rounds_loose(0.1, 0.05, 30, 0.25);
  CHECK(half >= 2 * full - 2);
  CHECK(half <= 2 * full + 2);
  // inverse-square scaling in epsilon
  const double ratio = static_cast<double>(required_rounds_tight(0.01, 0.05, 30)) /
                       static_cast<double>(required_rounds_tight(0.02, 0.05, 30));
  CHECK(ratio == doctest::Approx(4.0).epsilon(1e-3));
  CHECK_THROWS_AS(required_rounds_tight(0.0, 0.05, 30), ValidationError);
  CHECK_THROWS_AS(required_rounds_tight(0.1, 1.5, 30), ValidationError);
  CHECK_THROWS_AS(required_rounds_loose(0.1, 0.05, 30, 0.0), ValidationError);
}

TEST_CASE("statistical soundness at a relaxed working point") {
  // 200 independent estimates at the planner's round count; the count of runs
  // that break the sqrt(p)-scaled error bars must stay near delta
  const double eps = 0.05, delta = 0.1;
  const std::uint64_t rounds = required_rounds_tight(eps, delta, 2);
  REQUIRE(rounds == 4914ULL);
  const ExactInstance inst = ExactInstance::special_case(4, 2, 2, 3, 1.0);
  const auto want = intersection_pmf_exact(inst);
  int violations = 0;
  for (int s = 0; s < 200; ++s) {
    ScenarioConfig c = small_grid_config();
    c.seed = 9000 + static_cast<std::uint64_t>(s);
    const auto got = run(c, rounds, {.workers = 2, .progress = false}).pmf_hat();
    bool bad = false;
    for (std::size_t i = 0; i < got.size(); ++i)
      bad = bad || std::fabs(got[i] - want[i]) > eps * std::sqrt(want[i]);
    violations += bad;
  }
  // delta * 200 expected failures at most, plus 3-sigma binomial slack
  CHECK(violations <= 200 * delta + 3 * std::sqrt(200 * delta * (1 - delta)));
}

TEST_CASE("validation rejects inconsistent scenarios") {
  ScenarioConfig c = venue_config(Selectivity::medium, 3);
  c.slots = 100;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = venue_config(Selectivity::medium, 2);
  c.voting.kind = VotingRule::Kind::eliminate_high_low;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = venue_config(Selectivity::medium, 4);
  c.strategy = ReviewStrategy::heterogeneous_two_round;
  c.voting.kind = VotingRule::Kind::eliminate_high_low;
  CHECK_THROWS_AS(c.validate(), ValidationError);  // round 1 would see 2 reviews
  c = venue_config(Selectivity::medium, 3);
  c.behaviors.random_scoring = 0.7;
  c.behaviors.bias_scoring = 0.7;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = venue_config(Selectivity::medium, 3);
  c.metrics = {0};
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = venue_config(Selectivity::medium, 3);
  c.sigma.kind = SigmaPolicy::Kind::two_type;
  c.sigma.match = 0.5;
  c.sigma.mismatch = 2.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);  // needs two-type matching
  // infeasible score model is caught up front
  c = venue_config(Selectivity::medium, 3);
  c.sigma.value = 0.004;
  CHECK_THROWS_AS(c.validate(), ModelInfeasible);
}

TEST_CASE("behavior mixes shift accuracy the expected way") {
  const ScenarioConfig clean = venue_config(Selectivity::medium, 4);
  ScenarioConfig noisy = clean;
  noisy.behaviors.random_scoring = 0.8;
  const double e_clean = run(clean, 4000, {.workers = 2}).e_hat(10);
  const double e_noisy = run(noisy, 4000, {.workers = 2}).e_hat(10);
  CHECK(e_noisy < e_clean - 0.5);
}

TEST_CASE("two-type and many-type matching run and respond to the match rate") {
  ScenarioConfig c = venue_config(Selectivity::high, 4);
  c.sigma = {SigmaPolicy::Kind::two_type, 0, 0.5, 2.0, 0, 0};
  c.matching.kind = MatchingModel::Kind::two_type;
  c.matching.same_type_fraction = 0.1;
  const double e_low = run(c, 6000, {.workers = 2}).e_hat(10);
  c.matching.same_type_fraction = 1.0;
  const double e_high = run(c, 6000, {.workers = 2}).e_hat(10);
  CHECK(e_high > e_low + 0.3);

  ScenarioConfig mt = venue_config(Selectivity::medium, 4);
  mt.sigma = {SigmaPolicy::Kind::linear_in_critical, 0, 0, 0, 0.5, 1.5};
  mt.matching.kind = MatchingModel::Kind::many_type;
  mt.matching.levels = 3;
  mt.voting.kind = VotingRule::Kind::weighted_average;
  const AccuracyReport rep = run(mt, 3000, {.workers = 2});
  CHECK(rep.e_hat(10) > 5.0);  // sane accuracy, exercises the weighted path
}

TEST_CASE("round trace exposes the moving parts") {
  ScenarioConfig c = venue_config(Selectivity::medium, 3);
  const RoundTrace t = trace_round(c, 12);
  REQUIRE(static_cast<int>(t.qualities.size()) == c.papers);
  REQUIRE(static_cast<int>(t.intrinsic_order.size()) == c.papers);
  for (double q : t.qualities) {
    CHECK(q > 1.0);
    CHECK(q < 5.0);
  }
  for (std::size_t i = 1; i < t.intrinsic_order.size(); ++i)
    CHECK(t.qualities[static_cast<std::size_t>(t.intrinsic_order[i - 1])] >=
          t.qualities[static_cast<std::size_t>(t.intrinsic_order[i])]);
  CHECK(static_cast<int>(t.accepted.size()) == c.slots);
  for (const ReviewSet& set : t.reviews) {
    CHECK(static_cast<int>(set.scores.size()) == c.reviews_per_paper);
    for (int s : set.scores) {
      CHECK(s >= 1);
      CHECK(s <= 5);
    }
  }
}
