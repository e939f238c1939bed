// crsim: peer-review accuracy simulator.
//
// Subcommands:
//   simulate   Monte Carlo run of a scenario file
//   exact      closed-form result for the homogeneous grid special case
//   plan       round counts for the tight/loose accuracy guarantees
//   reproduce  canned scenario sweeps emitting plot-ready CSV
//   compare    two-round vs flat review strategy on one scenario
//
// Exit codes: 0 success, 2 bad input or configuration, 3 infeasible model.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "crsim/errors.hpp"
#include "crsim/exact.hpp"
#include "crsim/scenario_io.hpp"
#include "crsim/strategies.hpp"

namespace {

struct OutStream {
  std::ofstream file;
  std::ostream* os{&std::cout};
  explicit OutStream(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw crsim::ValidationError("cannot open output file " + path);
    os = &file;
  }
};

std::uint64_t pick_rounds(const crsim::LoadedScenario& sc, std::uint64_t cli_rounds,
                          bool cli_has_guarantee, const crsim::GuaranteeSpec& cli_spec) {
  if (cli_rounds > 0) return cli_rounds;
  if (cli_has_guarantee) return crsim::required_rounds(cli_spec);
  if (sc.run.rounds) return *sc.run.rounds;
  if (sc.run.guarantee) return crsim::required_rounds(*sc.run.guarantee);
  throw crsim::ValidationError(
      "no round count: pass --rounds/--epsilon or set run.rounds in the scenario file");
}

crsim::GuaranteeSpec::Bound parse_bound(const std::string& s) {
  if (s == "tight") return crsim::GuaranteeSpec::Bound::tight;
  if (s == "loose") return crsim::GuaranteeSpec::Bound::loose;
  throw crsim::ValidationError("--bound must be tight or loose");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"competitive group recommendation accuracy simulator"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate for a scenario file");
  std::string sim_config, sim_out = "-", sim_bound = "tight";
  std::uint64_t sim_rounds = 0;
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false, sim_progress = false;
  int sim_workers = 0;
  double sim_eps = 0, sim_delta = 0, sim_pfloor = 1.0;
  sim->add_option("--config", sim_config, "scenario JSON file")->required();
  sim->add_option("--rounds", sim_rounds, "simulation round count");
  sim->add_option("--seed", sim_seed, "override the scenario seed")
      ->each([&](const std::string&) { sim_seed_set = true; });
  sim->add_option("--workers", sim_workers, "worker thread count (0 = all cores)");
  sim->add_option("--epsilon", sim_eps, "guarantee accuracy target");
  sim->add_option("--delta", sim_delta, "guarantee failure probability");
  sim->add_option("--bound", sim_bound, "guarantee kind: tight|loose");
  sim->add_option("--p-floor", sim_pfloor, "loose bound: lower bound on nonzero pmf entries");
  sim->add_flag("--progress", sim_progress, "progress line on stderr");
  sim->add_option("--out", sim_out, "output CSV path ('-' = stdout)");

  // exact
  auto* exa = app.add_subcommand("exact", "closed-form pmf for the grid special case");
  std::string exa_config, exa_out = "-";
  bool exa_allow_large = false;
  exa->add_option("--config", exa_config, "scenario JSON file")->required();
  exa->add_option("--out", exa_out, "output CSV path ('-' = stdout)");
  exa->add_flag("--allow-large", exa_allow_large,
                "lift the instance size guard (cost grows exponentially)");

  // plan
  auto* pla = app.add_subcommand("plan", "required rounds for an accuracy guarantee");
  double pla_eps = 0, pla_delta = 0, pla_pfloor = 0;
  int pla_k = 0;
  std::string pla_bound = "tight";
  pla->add_option("--epsilon", pla_eps, "accuracy target")->required();
  pla->add_option("--delta", pla_delta, "failure probability")->required();
  pla->add_option("--k", pla_k, "slot count")->required();
  pla->add_option("--bound", pla_bound, "tight|loose");
  pla->add_option("--p-floor", pla_pfloor, "loose bound: pmf floor");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "run a canned scenario sweep");
  std::string rep_preset, rep_out = "-";
  std::uint64_t rep_rounds = 1000000, rep_seed = 20240501;
  int rep_workers = 0;
  bool rep_progress = false;
  std::string preset_help = "one of:";
  for (const auto& n : crsim::preset_names()) preset_help += " " + n;
  rep->add_option("--preset", rep_preset, preset_help)->required();
  rep->add_option("--rounds", rep_rounds, "rounds per scenario (default 1e6)");
  rep->add_option("--seed", rep_seed, "base seed");
  rep->add_option("--workers", rep_workers, "worker thread count");
  rep->add_flag("--progress", rep_progress, "progress lines on stderr");
  rep->add_option("--out", rep_out, "output CSV path ('-' = stdout)");

  // compare
  auto* cmp = app.add_subcommand("compare", "two-round vs flat review strategy");
  std::string cmp_strategy = "hetero", cmp_config, cmp_out = "-";
  int cmp_n = 0, cmp_workers = 0;
  std::uint64_t cmp_rounds = 1000000, cmp_seed = 0;
  bool cmp_seed_set = false, cmp_progress = false;
  cmp->add_option("--strategy", cmp_strategy, "alternative strategy (only: hetero)");
  cmp->add_option("--config", cmp_config, "scenario JSON file")->required();
  cmp->add_option("--n", cmp_n, "average reviews per candidate")->required();
  cmp->add_option("--rounds", cmp_rounds, "rounds per arm");
  cmp->add_option("--seed", cmp_seed, "override the scenario seed")
      ->each([&](const std::string&) { cmp_seed_set = true; });
  cmp->add_option("--workers", cmp_workers, "worker thread count");
  cmp->add_flag("--progress", cmp_progress, "progress lines on stderr");
  cmp->add_option("--out", cmp_out, "output CSV path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (sim->parsed()) {
    crsim::LoadedScenario sc = crsim::load_scenario(sim_config);
    if (sim_seed_set) sc.config.seed = sim_seed;
    crsim::GuaranteeSpec cli_spec;
    const bool has_guarantee = sim_eps > 0;
    if (has_guarantee) {
      cli_spec.epsilon = sim_eps;
      cli_spec.delta = sim_delta;
      cli_spec.bound = parse_bound(sim_bound);
      cli_spec.p_floor = sim_pfloor;
      cli_spec.slots = sc.config.slots;
    }
    const std::uint64_t rounds = pick_rounds(sc, sim_rounds, has_guarantee, cli_spec);
    crsim::RunOptions opts;
    opts.workers = sim_workers > 0 ? sim_workers : sc.run.workers.value_or(0);
    opts.progress = sim_progress;
    const crsim::AccuracyReport report = crsim::run(sc.config, rounds, opts);
    OutStream out(sim_out == "-" && sc.run.out ? *sc.run.out : sim_out);
    crsim::write_report_csv(*out.os, sc.config, report);
    return 0;
  }

  if (exa->parsed()) {
    crsim::LoadedScenario sc = crsim::load_scenario(exa_config);
    const crsim::ScenarioConfig& c = sc.config;
    if (c.quality.kind != crsim::QualitySource::Kind::linear_grid ||
        c.strategy != crsim::ReviewStrategy::homogeneous ||
        c.voting.kind != crsim::VotingRule::Kind::average ||
        c.tiebreak != crsim::TieBreakRule::random_pick ||
        c.sigma.kind != crsim::SigmaPolicy::Kind::constant ||
        c.matching.kind != crsim::MatchingModel::Kind::none ||
        c.behaviors.random_scoring + c.behaviors.bias_scoring > 0)
      throw crsim::ValidationError(
          "exact mode needs: linear-grid quality, homogeneous reviews, average voting, "
          "random tie-break, constant sigma, no matching model, no anomaly behaviors");
    crsim::ExactInstance inst = crsim::ExactInstance::special_case(
        c.papers, c.slots, c.reviews_per_paper, c.rating_levels, c.sigma.value,
        exa_allow_large ? c.papers : 12);
    const std::vector<double> pmf = crsim::intersection_pmf_exact(inst);
    OutStream out(exa_out);
    crsim::write_exact_csv(*out.os, c, pmf);
    return 0;
  }

  if (pla->parsed()) {
    const auto bound = parse_bound(pla_bound);
    std::uint64_t k;
    if (bound == crsim::GuaranteeSpec::Bound::tight) {
      k = crsim::required_rounds_tight(pla_eps, pla_delta, pla_k);
    } else {
      if (pla_pfloor <= 0)
        throw crsim::ValidationError("loose bound needs --p-floor in (0,1]");
      k = crsim::required_rounds_loose(pla_eps, pla_delta, pla_k, pla_pfloor);
    }
    std::cout << k << "\n";
    return 0;
  }

  if (rep->parsed()) {
    crsim::RunOptions opts;
    opts.workers = rep_workers;
    opts.progress = rep_progress;
    OutStream out(rep_out);
    crsim::run_preset(rep_preset, rep_rounds, rep_seed, opts, *out.os);
    return 0;
  }

  if (cmp->parsed()) {
    if (cmp_strategy != "hetero")
      throw crsim::ValidationError("only --strategy hetero is available");
    crsim::LoadedScenario sc = crsim::load_scenario(cmp_config);
    if (cmp_seed_set) sc.config.seed = cmp_seed;
    crsim::RunOptions opts;
    opts.workers = cmp_workers > 0 ? cmp_workers : sc.run.workers.value_or(0);
    opts.progress = cmp_progress;
    const crsim::ImprovementReport imp =
        crsim::compare_strategies(sc.config, cmp_n, cmp_rounds, opts);
    OutStream out(cmp_out);
    *out.os << "# strategy comparison: flat vs two-round, n=" << cmp_n << "\n";
    *out.os << "# scenario: " << crsim::scenario_to_json(sc.config) << "\n";
    *out.os << "# workload: flat=" << imp.workload_hom << " two-round=" << imp.workload_hetero
            << "\n";
    *out.os << "metric,i_or_bin,value,stderr,rounds,seed\n";
    char buf[40];
    for (int i : sc.config.metrics) {
      std::snprintf(buf, sizeof buf, "%.12g", imp.delta_e.at(i));
      *out.os << "dE," << i << "," << buf << ",";
      std::snprintf(buf, sizeof buf, "%.12g", imp.delta_stderr.at(i));
      *out.os << buf << "," << cmp_rounds << "," << sc.config.seed << "\n";
    }
    for (int i : sc.config.metrics) {
      if (!imp.ratio.count(i)) continue;
      std::snprintf(buf, sizeof buf, "%.12g", imp.ratio.at(i));
      *out.os << "dE_ratio," << i << "," << buf << ",0," << cmp_rounds << ","
              << sc.config.seed << "\n";
    }
    for (int i : sc.config.metrics) {
      std::snprintf(buf, sizeof buf, "%.12g", imp.hom.e_hat(i));
      *out.os << "E_hom," << i << "," << buf << ",";
      std::snprintf(buf, sizeof buf, "%.12g", imp.hom.e_stderr(i));
      *out.os << buf << "," << cmp_rounds << "," << sc.config.seed << "\n";
    }
    for (int i : sc.config.metrics) {
      std::snprintf(buf, sizeof buf, "%.12g", imp.hetero.e_hat(i));
      *out.os << "E_hetero," << i << "," << buf << ",";
      std::snprintf(buf, sizeof buf, "%.12g", imp.hetero.e_stderr(i));
      *out.os << buf << "," << cmp_rounds << "," << sc.config.seed << "\n";
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const crsim::ModelInfeasible& e) {
    std::cerr << "infeasible model: " << e.what() << "\n";
    return 3;
  } catch (const crsim::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
