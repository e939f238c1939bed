#include "crsim/scenario_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "crsim/errors.hpp"
#include "crsim/strategies.hpp"

namespace crsim {

using nlohmann::json;

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ValidationError("unknown key \"" + it.key() + "\" in " + where);
  }
}

template <class T>
T get_req(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    throw ValidationError("missing required key \"" + std::string(key) + "\" in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError("bad value for \"" + std::string(key) + "\" in " + where + ": " +
                          e.what());
  }
}

template <class T>
T get_opt(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return get_req<T>(j, key, where);
}

Selectivity parse_regime(const std::string& s) {
  if (s == "high") return Selectivity::high;
  if (s == "medium") return Selectivity::medium;
  if (s == "low") return Selectivity::low;
  if (s == "random") return Selectivity::random;
  throw ValidationError("unknown selectivity regime \"" + s + "\"");
}

const char* regime_name(Selectivity s) {
  switch (s) {
    case Selectivity::high: return "high";
    case Selectivity::medium: return "medium";
    case Selectivity::low: return "low";
    case Selectivity::random: return "random";
  }
  return "?";
}

TieBreakRule parse_tiebreak(const std::string& s) {
  if (s == "random") return TieBreakRule::random_pick;
  if (s == "least-variance") return TieBreakRule::least_variance;
  if (s == "largest-max") return TieBreakRule::largest_max;
  if (s == "largest-min") return TieBreakRule::largest_min;
  if (s == "largest-median") return TieBreakRule::largest_median;
  throw ValidationError("unknown tie-break rule \"" + s + "\"");
}

const char* tiebreak_name(TieBreakRule t) {
  switch (t) {
    case TieBreakRule::random_pick: return "random";
    case TieBreakRule::least_variance: return "least-variance";
    case TieBreakRule::largest_max: return "largest-max";
    case TieBreakRule::largest_min: return "largest-min";
    case TieBreakRule::largest_median: return "largest-median";
  }
  return "?";
}

const char* voting_name(VotingRule::Kind k) {
  switch (k) {
    case VotingRule::Kind::average: return "average";
    case VotingRule::Kind::eliminate_high_low: return "eliminate-high-low";
    case VotingRule::Kind::punish_low: return "punish-low";
    case VotingRule::Kind::weighted_average: return "weighted-average";
  }
  return "?";
}

ScenarioConfig parse_config(const json& j, const std::string& origin) {
  ScenarioConfig c;
  check_keys(j,
             {"papers", "slots", "rating_levels", "reviews_per_paper", "review_strategy",
              "quality", "voting", "tiebreak", "sigma", "matching", "behaviors", "metrics",
              "seed", "run"},
             origin);
  c.papers = get_req<int>(j, "papers", origin);
  c.slots = get_req<int>(j, "slots", origin);
  c.rating_levels = get_req<int>(j, "rating_levels", origin);
  c.reviews_per_paper = get_req<int>(j, "reviews_per_paper", origin);
  if (!j.contains("seed"))
    throw ValidationError("missing required key \"seed\" in " + origin +
                          " (runs must be reproducible)");
  c.seed = get_req<std::uint64_t>(j, "seed", origin);

  const std::string strat =
      get_opt<std::string>(j, "review_strategy", "homogeneous", origin);
  if (strat == "homogeneous")
    c.strategy = ReviewStrategy::homogeneous;
  else if (strat == "heterogeneous-two-round")
    c.strategy = ReviewStrategy::heterogeneous_two_round;
  else
    throw ValidationError("unknown review_strategy \"" + strat + "\"");

  if (j.contains("quality")) {
    const json& q = j.at("quality");
    check_keys(q, {"source", "regime"}, origin + ".quality");
    const std::string src = get_req<std::string>(q, "source", origin + ".quality");
    if (src == "regime") {
      c.quality.kind = QualitySource::Kind::regime;
      c.quality.regime =
          parse_regime(get_req<std::string>(q, "regime", origin + ".quality"));
    } else if (src == "linear-grid") {
      c.quality.kind = QualitySource::Kind::linear_grid;
      if (q.contains("regime"))
        throw ValidationError("quality.regime is meaningless for the linear grid");
    } else {
      throw ValidationError("unknown quality source \"" + src + "\"");
    }
  }

  if (j.contains("voting")) {
    const json& v = j.at("voting");
    check_keys(v, {"rule", "eta"}, origin + ".voting");
    const std::string rule = get_req<std::string>(v, "rule", origin + ".voting");
    if (rule == "average")
      c.voting.kind = VotingRule::Kind::average;
    else if (rule == "eliminate-high-low")
      c.voting.kind = VotingRule::Kind::eliminate_high_low;
    else if (rule == "punish-low")
      c.voting.kind = VotingRule::Kind::punish_low;
    else if (rule == "weighted-average")
      c.voting.kind = VotingRule::Kind::weighted_average;
    else
      throw ValidationError("unknown voting rule \"" + rule + "\"");
    if (v.contains("eta")) {
      if (rule != "punish-low")
        throw ValidationError("eta only applies to the punish-low rule");
      const auto eta = get_req<std::vector<long long>>(v, "eta", origin + ".voting");
      if (eta.size() != 2) throw ValidationError("eta must be a [numerator, denominator] pair");
      c.voting.eta = Rat::of(eta[0], eta[1]);
    }
  }

  c.tiebreak = parse_tiebreak(get_opt<std::string>(j, "tiebreak", "least-variance", origin));

  if (j.contains("sigma")) {
    const json& s = j.at("sigma");
    check_keys(s, {"policy", "value", "match", "mismatch", "base", "slope"}, origin + ".sigma");
    const std::string pol = get_req<std::string>(s, "policy", origin + ".sigma");
    if (pol == "constant") {
      c.sigma.kind = SigmaPolicy::Kind::constant;
      c.sigma.value = get_req<double>(s, "value", origin + ".sigma");
    } else if (pol == "two-type") {
      c.sigma.kind = SigmaPolicy::Kind::two_type;
      c.sigma.match = get_req<double>(s, "match", origin + ".sigma");
      c.sigma.mismatch = get_req<double>(s, "mismatch", origin + ".sigma");
    } else if (pol == "linear-critical") {
      c.sigma.kind = SigmaPolicy::Kind::linear_in_critical;
      c.sigma.base = get_req<double>(s, "base", origin + ".sigma");
      c.sigma.slope = get_req<double>(s, "slope", origin + ".sigma");
    } else {
      throw ValidationError("unknown sigma policy \"" + pol + "\"");
    }
  }

  if (j.contains("matching")) {
    const json& mm = j.at("matching");
    check_keys(mm, {"model", "critical", "same_type_fraction", "levels", "map"},
               origin + ".matching");
    const std::string model = get_req<std::string>(mm, "model", origin + ".matching");
    if (model == "none") {
      c.matching.kind = MatchingModel::Kind::none;
      c.matching.critical = get_opt<double>(mm, "critical", 1.0, origin + ".matching");
    } else if (model == "two-type") {
      c.matching.kind = MatchingModel::Kind::two_type;
      c.matching.same_type_fraction =
          get_req<double>(mm, "same_type_fraction", origin + ".matching");
    } else if (model == "many-type") {
      c.matching.kind = MatchingModel::Kind::many_type;
      c.matching.levels = get_opt<int>(mm, "levels", 3, origin + ".matching");
      const std::string map = get_opt<std::string>(mm, "map", "identity", origin + ".matching");
      if (map == "identity")
        c.matching.map = CriticalMap::identity;
      else if (map == "square")
        c.matching.map = CriticalMap::square;
      else
        throw ValidationError("unknown matching map \"" + map + "\"");
    } else {
      throw ValidationError("unknown matching model \"" + model + "\"");
    }
  }

  if (j.contains("behaviors")) {
    const json& b = j.at("behaviors");
    check_keys(b, {"random-scoring", "bias-scoring"}, origin + ".behaviors");
    c.behaviors.random_scoring = get_opt<double>(b, "random-scoring", 0.0, origin);
    c.behaviors.bias_scoring = get_opt<double>(b, "bias-scoring", 0.0, origin);
  }

  if (j.contains("metrics")) {
    c.metrics = get_req<std::vector<int>>(j, "metrics", origin);
  } else {
    c.metrics.clear();
    for (int i : {1, 5, 10, c.slots})
      if (i >= 1 && i <= c.papers) c.metrics.push_back(i);
  }
  c.validate();
  return c;
}

RunParams parse_run(const json& j, const ScenarioConfig& c, const std::string& origin) {
  RunParams rp;
  if (!j.contains("run")) return rp;
  const json& r = j.at("run");
  check_keys(r, {"rounds", "workers", "out", "guarantee"}, origin + ".run");
  if (r.contains("rounds")) rp.rounds = get_req<std::uint64_t>(r, "rounds", origin + ".run");
  if (r.contains("workers")) rp.workers = get_req<int>(r, "workers", origin + ".run");
  if (r.contains("out")) rp.out = get_req<std::string>(r, "out", origin + ".run");
  if (r.contains("guarantee")) {
    const json& g = r.at("guarantee");
    check_keys(g, {"epsilon", "delta", "bound", "p_floor"}, origin + ".run.guarantee");
    GuaranteeSpec spec;
    spec.epsilon = get_req<double>(g, "epsilon", origin);
    spec.delta = get_req<double>(g, "delta", origin);
    spec.slots = c.slots;
    const std::string bound = get_opt<std::string>(g, "bound", "tight", origin);
    if (bound == "tight")
      spec.bound = GuaranteeSpec::Bound::tight;
    else if (bound == "loose")
      spec.bound = GuaranteeSpec::Bound::loose;
    else
      throw ValidationError("guarantee bound must be \"tight\" or \"loose\"");
    spec.p_floor = get_opt<double>(g, "p_floor", 1.0, origin);
    required_rounds(spec);  // validates the parameters
    rp.guarantee = spec;
  }
  return rp;
}

}  // namespace

LoadedScenario parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse " + origin + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(origin + " must hold a JSON object");
  LoadedScenario out;
  out.config = parse_config(j, origin);
  out.run = parse_run(j, out.config, origin);
  return out;
}

LoadedScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

std::string scenario_to_json(const ScenarioConfig& c) {
  json j;
  j["papers"] = c.papers;
  j["slots"] = c.slots;
  j["rating_levels"] = c.rating_levels;
  j["reviews_per_paper"] = c.reviews_per_paper;
  j["review_strategy"] = c.strategy == ReviewStrategy::homogeneous
                             ? "homogeneous"
                             : "heterogeneous-two-round";
  if (c.quality.kind == QualitySource::Kind::regime)
    j["quality"] = {{"source", "regime"}, {"regime", regime_name(c.quality.regime)}};
  else
    j["quality"] = {{"source", "linear-grid"}};
  j["voting"] = {{"rule", voting_name(c.voting.kind)}};
  if (c.voting.kind == VotingRule::Kind::punish_low)
    j["voting"]["eta"] = {c.voting.eta.num, c.voting.eta.den};
  j["tiebreak"] = tiebreak_name(c.tiebreak);
  switch (c.sigma.kind) {
    case SigmaPolicy::Kind::constant:
      j["sigma"] = {{"policy", "constant"}, {"value", c.sigma.value}};
      break;
    case SigmaPolicy::Kind::two_type:
      j["sigma"] = {{"policy", "two-type"}, {"match", c.sigma.match},
                    {"mismatch", c.sigma.mismatch}};
      break;
    case SigmaPolicy::Kind::linear_in_critical:
      j["sigma"] = {{"policy", "linear-critical"}, {"base", c.sigma.base},
                    {"slope", c.sigma.slope}};
      break;
  }
  switch (c.matching.kind) {
    case MatchingModel::Kind::none:
      j["matching"] = {{"model", "none"}, {"critical", c.matching.critical}};
      break;
    case MatchingModel::Kind::two_type:
      j["matching"] = {{"model", "two-type"},
                       {"same_type_fraction", c.matching.same_type_fraction}};
      break;
    case MatchingModel::Kind::many_type:
      j["matching"] = {{"model", "many-type"},
                       {"levels", c.matching.levels},
                       {"map", c.matching.map == CriticalMap::identity ? "identity" : "square"}};
      break;
  }
  j["behaviors"] = {{"random-scoring", c.behaviors.random_scoring},
                    {"bias-scoring", c.behaviors.bias_scoring}};
  j["metrics"] = c.metrics;
  j["seed"] = c.seed;
  return j.dump();
}

namespace {

void write_header(std::ostream& out, const ScenarioConfig& c) {
  char digest[24];
  std::snprintf(digest, sizeof digest, "%016" PRIx64, c.digest());
  out << "# scenario: " << scenario_to_json(c) << "\n";
  out << "# digest: " << digest << "\n";
  out << "metric,i_or_bin,value,stderr,rounds,seed\n";
}

void write_rows(std::ostream& out, const ScenarioConfig& c, const AccuracyReport& rep,
                const std::string& tag) {
  const std::string suffix = tag.empty() ? "" : "|" + tag;
  const auto pmf = rep.pmf_hat();
  for (std::size_t b = 0; b < pmf.size(); ++b)
    out << "pmf" << suffix << "," << b << "," << fmt12(pmf[b]) << ","
        << fmt12(rep.pmf_stderr(static_cast<int>(b))) << "," << rep.rounds << "," << c.seed
        << "\n";
  for (int i : c.metrics)
    out << "E" << suffix << "," << i << "," << fmt12(rep.e_hat(i)) << ","
        << fmt12(rep.e_stderr(i)) << "," << rep.rounds << "," << c.seed << "\n";
  for (int i : c.metrics)
    out << "Var" << suffix << "," << i << "," << fmt12(rep.var_hat(i)) << ","
        << fmt12(rep.var_stderr(i)) << "," << rep.rounds << "," << c.seed << "\n";
}

}  // namespace

void write_report_csv(std::ostream& out, const ScenarioConfig& c, const AccuracyReport& rep) {
  write_header(out, c);
  write_rows(out, c, rep, "");
}

void write_exact_csv(std::ostream& out, const ScenarioConfig& c,
                     const std::vector<double>& pmf) {
  write_header(out, c);
  for (std::size_t b = 0; b < pmf.size(); ++b)
    out << "pmf," << b << "," << fmt12(pmf[b]) << ",0,0," << c.seed << "\n";
  double e = 0, v = 0;
  for (std::size_t b = 0; b < pmf.size(); ++b) e += static_cast<double>(b) * pmf[b];
  for (std::size_t b = 0; b < pmf.size(); ++b) {
    const double d = static_cast<double>(b) - e;
    v += d * d * pmf[b];
  }
  out << "E," << c.slots << "," << fmt12(e) << ",0,0," << c.seed << "\n";
  out << "Var," << c.slots << "," << fmt12(v) << ",0,0," << c.seed << "\n";
}

// ---- presets -----------------------------------------------------------------

namespace {

ScenarioConfig venue_base(Selectivity regime, int n, std::uint64_t seed) {
  ScenarioConfig c;
  c.papers = 200;
  c.slots = 30;
  c.rating_levels = 5;
  c.reviews_per_paper = n;
  c.quality = {QualitySource::Kind::regime, regime};
  c.voting.kind = VotingRule::Kind::average;
  c.tiebreak = TieBreakRule::least_variance;
  c.sigma.kind = SigmaPolicy::Kind::constant;
  c.sigma.value = 1.0;
  c.metrics = {1, 5, 10, 30};
  c.seed = seed;
  return c;
}

constexpr Selectivity kRegimes[] = {Selectivity::high, Selectivity::medium, Selectivity::low,
                                    Selectivity::random};

void preset_header(std::ostream& out, const std::string& name, std::uint64_t rounds,
                   std::uint64_t seed, const std::string& notes) {
  out << "# preset: " << name << "\n";
  out << "# rounds per scenario: " << rounds << "\n";
  out << "# seed: " << seed << "\n";
  if (!notes.empty()) out << "# " << notes << "\n";
  out << "metric,i_or_bin,value,stderr,rounds,seed\n";
}

void run_and_emit(std::ostream& out, const ScenarioConfig& c, std::uint64_t rounds,
                  const RunOptions& opts, const std::string& tag) {
  write_rows(out, c, run(c, rounds, opts), tag);
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"table4",      "table5",      "fig-workload",       "fig-voting",
          "fig-tiebreak", "fig-twotype", "fig-manytype",       "fig-anomaly-random",
          "fig-anomaly-bias", "fig-hetero"};
}

void run_preset(const std::string& name, std::uint64_t rounds, std::uint64_t seed,
                const RunOptions& opts, std::ostream& out) {
  const std::string base_note =
      "base scenario: " + scenario_to_json(venue_base(Selectivity::medium, 3, seed));
  if (name == "table4") {
    preset_header(out, name, rounds, seed, base_note + "; sweep n in {3,4,6,8,10}");
    for (int n : {3, 4, 6, 8, 10})
      run_and_emit(out, venue_base(Selectivity::medium, n, seed), rounds, opts,
                   "n=" + std::to_string(n));
  } else if (name == "table5") {
    preset_header(out, name, rounds, seed, base_note + "; n=3, sweep regime");
    for (Selectivity r : kRegimes)
      run_and_emit(out, venue_base(r, 3, seed), rounds, opts,
                   std::string("regime=") + regime_name(r));
  } else if (name == "fig-workload") {
    preset_header(out, name, rounds, seed, base_note + "; sweep regime x n in {2..12}");
    for (Selectivity r : kRegimes)
      for (int n = 2; n <= 12; ++n)
        run_and_emit(out, venue_base(r, n, seed), rounds, opts,
                     std::string("regime=") + regime_name(r) + ";n=" + std::to_string(n));
  } else if (name == "fig-voting") {
    preset_header(out, name, rounds, seed,
                  base_note + "; sweep regime x rule x n (eliminate-high-low from n=3)");
    const std::pair<VotingRule::Kind, const char*> rules[] = {
        {VotingRule::Kind::average, "average"},
        {VotingRule::Kind::eliminate_high_low, "eliminate-high-low"},
        {VotingRule::Kind::punish_low, "punish-low"}};
    for (Selectivity r : kRegimes)
      for (auto [rule, rname] : rules)
        for (int n = rule == VotingRule::Kind::eliminate_high_low ? 3 : 2; n <= 12; ++n) {
          ScenarioConfig c = venue_base(r, n, seed);
          c.voting.kind = rule;
          run_and_emit(out, c, rounds, opts,
                       std::string("regime=") + regime_name(r) + ";rule=" + rname +
                           ";n=" + std::to_string(n));
        }
  } else if (name == "fig-tiebreak") {
    preset_header(out, name, rounds, seed, base_note + "; sweep regime x tiebreak x n");
    const TieBreakRule ties[] = {TieBreakRule::least_variance, TieBreakRule::largest_max,
                                 TieBreakRule::largest_min, TieBreakRule::largest_median};
    for (Selectivity r : kRegimes)
      for (TieBreakRule t : ties)
        for (int n = 2; n <= 12; ++n) {
          ScenarioConfig c = venue_base(r, n, seed);
          c.tiebreak = t;
          run_and_emit(out, c, rounds, opts,
                       std::string("regime=") + regime_name(r) +
                           ";tiebreak=" + tiebreak_name(t) + ";n=" + std::to_string(n));
        }
  } else if (name == "fig-twotype") {
    preset_header(out, name, rounds, seed,
                  base_note + "; n=4, two-type sigma (0.5/2.0), sweep regime x match fraction");
    for (Selectivity r : kRegimes)
      for (int f = 1; f <= 10; ++f) {
        ScenarioConfig c = venue_base(r, 4, seed);
        c.sigma.kind = SigmaPolicy::Kind::two_type;
        c.sigma.match = 0.5;
        c.sigma.mismatch = 2.0;
        c.matching.kind = MatchingModel::Kind::two_type;
        c.matching.same_type_fraction = f / 10.0;
        run_and_emit(out, c, rounds, opts,
                     std::string("regime=") + regime_name(r) + ";frac=" + fmt12(f / 10.0));
      }
  } else if (name == "fig-manytype") {
    preset_header(out, name, rounds, seed,
                  base_note +
                      "; 3 expertise levels, sigma = 0.5 + 1.5(1-c), random matching, "
                      "sweep regime x rule x n");
    const std::pair<VotingRule::Kind, const char*> rules[] = {
        {VotingRule::Kind::average, "average"},
        {VotingRule::Kind::eliminate_high_low, "eliminate-high-low"},
        {VotingRule::Kind::punish_low, "punish-low"},
        {VotingRule::Kind::weighted_average, "weighted-average"}};
    for (Selectivity r : kRegimes)
      for (auto [rule, rname] : rules)
        for (int n = rule == VotingRule::Kind::eliminate_high_low ? 3 : 2; n <= 12; ++n) {
          ScenarioConfig c = venue_base(r, n, seed);
          c.voting.kind = rule;
          c.sigma.kind = SigmaPolicy::Kind::linear_in_critical;
          c.sigma.base = 0.5;
          c.sigma.slope = 1.5;
          c.matching.kind = MatchingModel::Kind::many_type;
          c.matching.levels = 3;
          c.matching.map = CriticalMap::identity;
          run_and_emit(out, c, rounds, opts,
                       std::string("regime=") + regime_name(r) + ";rule=" + rname +
                           ";n=" + std::to_string(n));
        }
  } else if (name == "fig-anomaly-random") {
    preset_header(out, name, rounds, seed,
                  base_note + "; n=4, sweep regime x random-scoring fraction 0.1..1");
    for (Selectivity r : kRegimes)
      for (int f = 1; f <= 10; ++f) {
        ScenarioConfig c = venue_base(r, 4, seed);
        c.behaviors.random_scoring = f / 10.0;
        run_and_emit(out, c, rounds, opts,
                     std::string("regime=") + regime_name(r) + ";frac=" + fmt12(f / 10.0));
      }
  } else if (name == "fig-anomaly-bias") {
    preset_header(out, name, rounds, seed,
                  base_note + "; n=4, sweep regime x bias-scoring fraction 0..0.3");
    for (Selectivity r : kRegimes)
      for (int f = 0; f <= 6; ++f) {
        ScenarioConfig c = venue_base(r, 4, seed);
        c.behaviors.bias_scoring = f / 20.0;
        run_and_emit(out, c, rounds, opts,
                     std::string("regime=") + regime_name(r) + ";frac=" + fmt12(f / 20.0));
      }
  } else if (name == "fig-hetero") {
    preset_header(out, name, rounds, seed,
                  base_note + "; two-round vs flat plan, sweep regime x n in {2..12}");
    for (Selectivity r : kRegimes)
      for (int n = 2; n <= 12; ++n) {
        const ScenarioConfig base = venue_base(r, n, seed);
        const ImprovementReport imp = compare_strategies(base, n, rounds, opts);
        const std::string tag =
            std::string("regime=") + regime_name(r) + ";n=" + std::to_string(n);
        write_rows(out, base, imp.hom, "arm=hom;" + tag);
        write_rows(out, base, imp.hetero, "arm=hetero;" + tag);
        for (int i : base.metrics) {
          out << "dE|" << tag << "," << i << "," << fmt12(imp.delta_e.at(i)) << ","
              << fmt12(imp.delta_stderr.at(i)) << "," << rounds << "," << seed << "\n";
          if (imp.ratio.count(i))
            out << "dE_ratio|" << tag << "," << i << "," << fmt12(imp.ratio.at(i)) << ","
                << fmt12(imp.delta_stderr.at(i) / imp.hom.e_hat(i)) << "," << rounds << ","
                << seed << "\n";
        }
        out << "workload_hom|" << tag << ",0," << imp.workload_hom << ",0," << rounds << ","
            << seed << "\n";
        out << "workload_hetero|" << tag << ",0," << imp.workload_hetero << ",0," << rounds
            << "," << seed << "\n";
      }
  } else {
    throw ValidationError("unknown preset \"" + name + "\"");
  }
}

}  // namespace crsim
