#include "crsim/strategies.hpp"

#include <cmath>

#include "crsim/errors.hpp"

namespace crsim {

long long workload(const ReviewPlan& plan, int papers) {
  if (plan.n < 1 || papers < 1) throw ValidationError("workload needs n >= 1 and papers >= 1");
  if (plan.kind == ReviewStrategy::homogeneous)
    return static_cast<long long>(papers) * plan.n;
  if (plan.n < 2) throw ValidationError("the two-round strategy needs n >= 2");
  return static_cast<long long>(papers) * plan.round1_reviews() +
         static_cast<long long>(ReviewPlan::survivors(papers)) * plan.round2_reviews();
}

ImprovementReport compare_plans(const ScenarioConfig& base, ReviewPlan a, ReviewPlan b,
                                std::uint64_t rounds, const RunOptions& opts) {
  ScenarioConfig ca = base;
  ca.strategy = a.kind;
  ca.reviews_per_paper = a.n;
  ScenarioConfig cb = base;
  cb.strategy = b.kind;
  cb.reviews_per_paper = b.n;

  ImprovementReport rep;
  rep.hom = run(ca, rounds, opts);
  rep.hetero = run(cb, rounds, opts);
  rep.workload_hom = workload(a, base.papers);
  rep.workload_hetero = workload(b, base.papers);
  for (int i : base.metrics) {
    const double eh = rep.hom.e_hat(i);
    const double et = rep.hetero.e_hat(i);
    rep.delta_e[i] = et - eh;
    rep.delta_stderr[i] =
        std::sqrt(rep.hom.e_stderr(i) * rep.hom.e_stderr(i) +
                  rep.hetero.e_stderr(i) * rep.hetero.e_stderr(i));
    if (eh > 0) rep.ratio[i] = (et - eh) / eh;
  }
  return rep;
}

ImprovementReport compare_strategies(const ScenarioConfig& base, int n, std::uint64_t rounds,
                                     const RunOptions& opts) {
  if (n < 2) throw ValidationError("strategy comparison needs n >= 2");
  return compare_plans(base, ReviewPlan{ReviewStrategy::homogeneous, n},
                       ReviewPlan{ReviewStrategy::heterogeneous_two_round, n}, rounds, opts);
}

}  // namespace crsim
