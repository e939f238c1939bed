#pragma once

#include <map>

#include "crsim/engine.hpp"

namespace crsim {

// Review-allocation plan.  The two-round plan spends half the budget to cut
// the field in half, then concentrates the rest on the survivors.
struct ReviewPlan {
  ReviewStrategy kind{ReviewStrategy::homogeneous};
  int n{3};  // average reviews per candidate

  int round1_reviews() const { return n / 2; }
  int round2_reviews() const { return 2 * ((n + 1) / 2); }
  static int survivors(int papers) { return (papers + 1) / 2; }
};

// Total number of reviews the plan spends on N candidates.
long long workload(const ReviewPlan& plan, int papers);

struct ImprovementReport {
  std::map<int, double> delta_e;  // i -> E[I_i | two-round] - E[I_i | flat]
  std::map<int, double> ratio;    // defined only where the flat-plan mean is > 0
  std::map<int, double> delta_stderr;
  long long workload_hom{0};
  long long workload_hetero{0};
  AccuracyReport hom;
  AccuracyReport hetero;
};

// Runs both plans on the same scenario with the same seed (common random
// numbers: each round draws identical qualities in both arms).
ImprovementReport compare_strategies(const ScenarioConfig& base, int n, std::uint64_t rounds,
                                     const RunOptions& opts = {});

// Generalized form used by tests; comparing a plan against itself yields
// exactly zero deltas.
ImprovementReport compare_plans(const ScenarioConfig& base, ReviewPlan a, ReviewPlan b,
                                std::uint64_t rounds, const RunOptions& opts = {});

}  // namespace crsim
