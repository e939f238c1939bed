#include <array>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "crsim/errors.hpp"
#include "crsim/rng.hpp"
#include "crsim/score.hpp"

using namespace crsim;

namespace {

// Independent check on the mean correction: solve the 2x2 system
//   x * mass_lo + y * mass_hi = 1          (normalization)
//   x * e_lo    + y * e_hi    = Q          (mean)
// for the side scales x = 1 - beta, y = 1 + alpha, from the raw bucketed pmf.
struct SideScales {
  double x, y;
};
SideScales solve_scales(const std::vector<double>& p, double q) {
  const int m = static_cast<int>(p.size());
  const int fl = static_cast<int>(q);
  double mass_lo = 0, mass_hi = 0, e_lo = 0, e_hi = 0;
  for (int l = 1; l <= m; ++l) {
    if (l <= fl) {
      mass_lo += p[l - 1];
      e_lo += l * p[l - 1];
    } else {
      mass_hi += p[l - 1];
      e_hi += l * p[l - 1];
    }
  }
  const double det = mass_lo * e_hi - mass_hi * e_lo;
  return {(e_hi - mass_hi * q) / det, (mass_lo * q - e_lo) / det};
}

}  // namespace

TEST_CASE("bucketing symmetry") {
  const auto mid = discretize(3.0, 1.0, 5);
  for (int l = 1; l <= 5; ++l)
    CHECK(mid[l - 1] == doctest::Approx(mid[5 - l]).epsilon(1e-14));

  const auto half = discretize(2.5, 1.0, 5);
  CHECK(half[1] == doctest::Approx(half[2]).epsilon(1e-14));
}

TEST_CASE("bucketing matches the high-precision oracle at (4.2, 0.8)") {
  // frozen from a 40-digit normal-CDF evaluation of the bucketing formula
  const double want[5] = {0.00038738151263164602, 0.017326654796655322, 0.18355370183146010,
                          0.48040375585332527, 0.31832850600592766};
  const auto got = discretize(4.2, 0.8, 5);
  for (int l = 0; l < 5; ++l) CHECK(got[l] == doctest::Approx(want[l]).epsilon(1e-12));
}

TEST_CASE("mean correction leaves a symmetric pmf untouched") {
  auto p = discretize(3.0, 1.0, 5);
  const auto orig = p;
  auto [alpha, beta] = adjust_in_place(p.data(), 3.0, 5);
  CHECK(std::fabs(alpha) <= 1e-12);
  CHECK(std::fabs(beta) <= 1e-12);
  for (int l = 0; l < 5; ++l) CHECK(std::fabs(p[l] - orig[l]) <= 1e-12);
}

TEST_CASE("mean correction at (4.2, 0.8): frozen values and the linear-solve oracle") {
  const ScorePmf pmf = make_score_pmf(4.2, 0.8, 5);
  CHECK(pmf.alpha == doctest::Approx(0.24013272485475228).epsilon(1e-12));
  CHECK(pmf.beta == doctest::Approx(0.11213772648502520).epsilon(1e-12));
  CHECK(pmf.mean() == doctest::Approx(4.2).epsilon(1e-12));
  const auto raw = discretize(4.2, 0.8, 5);
  const auto sc = solve_scales(raw, 4.2);
  CHECK(1.0 - pmf.beta == doctest::Approx(sc.x).epsilon(1e-10));
  CHECK(1.0 + pmf.alpha == doctest::Approx(sc.y).epsilon(1e-10));
}

TEST_CASE("mean correction signs when the bucketed mean overshoots") {
  // E[L] = 1.811 > Q = 1.5, so both scales move the other way
  const ScorePmf pmf = make_score_pmf(1.5, 1.0, 5);
  CHECK(pmf.alpha == doctest::Approx(-0.38376953725).epsilon(1e-9));
  CHECK(pmf.beta == doctest::Approx(-0.562108004817).epsilon(1e-9));
  CHECK(pmf.mean() == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("score model properties over the working grid") {
  for (double sigma : {0.5, 1.0, 2.0}) {
    for (int qi = 11; qi <= 49; ++qi) {
      const double q = qi / 10.0;
      const ScorePmf pmf = make_score_pmf(q, sigma, 5);
      double sum = 0;
      for (double p : pmf.probs) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        sum += p;
      }
      CHECK(std::fabs(sum - 1.0) <= 1e-12);
      CHECK(std::fabs(pmf.mean() - q) <= 1e-9);
      // normalization identity between the two side scales
      const auto raw = discretize(q, sigma, 5);
      double mass_lo = 0, mass_hi = 0;
      for (int l = 1; l <= 5; ++l) (l <= static_cast<int>(q) ? mass_lo : mass_hi) += raw[l - 1];
      CHECK(std::fabs(pmf.alpha * mass_hi - pmf.beta * mass_lo) <= 1e-12);
      // cross-check the scales against the independent linear solve
      const auto sc = solve_scales(raw, q);
      CHECK(std::fabs((1.0 - pmf.beta) - sc.x) <= 1e-10);
      CHECK(std::fabs((1.0 + pmf.alpha) - sc.y) <= 1e-10);
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(discretize(1.0, 1.0, 5), ValidationError);
  CHECK_THROWS_AS(discretize(5.0, 1.0, 5), ValidationError);
  CHECK_THROWS_AS(discretize(3.0, 0.0, 5), ValidationError);
  CHECK_THROWS_AS(discretize(3.0, -1.0, 5), ValidationError);
  // all bucketed mass collapses onto one side: nothing to trade
  CHECK_THROWS_AS(make_score_pmf(4.999, 0.01, 5), ModelInfeasible);
}

TEST_CASE("expertise/critical coupling") {
  auto [e1, c1] = matching_to_expertise_critical(1.0, 3, CriticalMap::identity);
  CHECK(e1 == 3);
  CHECK(c1 == 1.0);
  auto [e0, c0] = matching_to_expertise_critical(0.0, 3, CriticalMap::identity);
  CHECK(e0 == 1);
  CHECK(c0 == 0.0);
  auto [eh, ch] = matching_to_expertise_critical(0.5, 3, CriticalMap::identity);
  CHECK(eh == 2);
  CHECK(ch == 0.5);
  auto [es, cs] = matching_to_expertise_critical(0.5, 3, CriticalMap::square);
  CHECK(es == 2);
  CHECK(cs == 0.25);
  CHECK_THROWS_AS(matching_to_expertise_critical(1.5, 3, CriticalMap::identity),
                  ValidationError);
}

TEST_CASE("sigma policies") {
  SigmaPolicy two{SigmaPolicy::Kind::two_type, 1.0, 0.5, 2.0, 0, 0};
  CHECK(sigma_of_critical(two, 0.0, true) == 0.5);
  CHECK(sigma_of_critical(two, 0.0, false) == 2.0);
  SigmaPolicy lin{SigmaPolicy::Kind::linear_in_critical, 0, 0, 0, 0.5, 1.5};
  CHECK(sigma_of_critical(lin, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sigma_of_critical(lin, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  // strictly decreasing in the critical degree
  double prev = 1e9;
  for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double s = sigma_of_critical(lin, c);
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("score sampling: point mass, mean, and chi-squared fit") {
  const double point[5] = {0, 0, 0, 1, 0};
  RoundRng rng(3, 0);
  for (int i = 0; i < 50; ++i) CHECK(sample_score(point, 5, rng.next_unit()) == 4);

  const ScorePmf mid = make_score_pmf(3.0, 1.0, 5);
  double var = 0;
  for (int l = 1; l <= 5; ++l) var += (l - 3.0) * (l - 3.0) * mid.probs[l - 1];
  RoundRng rng2(3, 1);
  double sum = 0;
  for (int i = 0; i < 1000000; ++i) sum += sample_score(mid, rng2);
  CHECK(std::fabs(sum / 1e6 - 3.0) <= 3 * std::sqrt(var / 1e6));

  const ScorePmf skew = make_score_pmf(4.2, 0.8, 5);
  std::array<long long, 5> freq{};
  RoundRng rng3(3, 2);
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) ++freq[static_cast<std::size_t>(sample_score(skew, rng3) - 1)];
  double chi2 = 0;
  for (int l = 0; l < 5; ++l) {
    const double expect = skew.probs[static_cast<std::size_t>(l)] * kDraws;
    chi2 += (freq[static_cast<std::size_t>(l)] - expect) *
            (freq[static_cast<std::size_t>(l)] - expect) / expect;
  }
  CHECK(chi2 < 18.4668269529);  // chi2(4 dof) upper 0.1% point
}

TEST_CASE("behavior overlays") {
  RoundRng rng(5, 0);
  CHECK(apply_behavior(Behavior::honest, 4, 5, rng) == 4);
  CHECK(apply_behavior(Behavior::bias_scoring, 2, 5, rng) == 5);
  CHECK(apply_behavior(Behavior::bias_scoring, 1, 5, rng) == 5);
  CHECK(apply_behavior(Behavior::bias_scoring, 3, 5, rng) == 1);  // boundary goes low
  CHECK(apply_behavior(Behavior::bias_scoring, 5, 5, rng) == 1);

  std::array<long long, 5> freq{};
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i)
    ++freq[static_cast<std::size_t>(apply_behavior(Behavior::random_scoring, 3, 5, rng) - 1)];
  const double se = std::sqrt(0.2 * 0.8 / kDraws);
  for (long long f : freq)
    CHECK(std::fabs(static_cast<double>(f) / kDraws - 0.2) <= 3 * se);

  // never outside the scale, for any behavior and honest input
  for (int s = 1; s <= 5; ++s)
    for (Behavior b : {Behavior::honest, Behavior::random_scoring, Behavior::bias_scoring}) {
      const int out = apply_behavior(b, s, 5, rng);
      CHECK(out >= 1);
      CHECK(out <= 5);
    }
}
