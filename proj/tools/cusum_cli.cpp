#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cusum/calibration.hpp"
#include "cusum/config.hpp"
#include "cusum/errors.hpp"
#include "cusum/oracle.hpp"
#include "cusum/simulation.hpp"
#include "cusum/trace.hpp"

namespace {

using namespace cusum;

std::unique_ptr<std::ofstream> open_out(const std::string& path,
                                        std::ostream*& os) {
  if (path.empty()) {
    os = &std::cout;
    return nullptr;
  }
  auto f = std::make_unique<std::ofstream>(path);
  if (!*f) throw ConfigError("cannot open output file '" + path + "'");
  os = f.get();
  return f;
}

Regime regime_from(const std::string& s) {
  if (s == "f0" || s == "F0") return Regime::F0;
  if (s == "f1" || s == "F1") return Regime::F1;
  throw ConfigError("regime must be f0 or f1");
}

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
};

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg = opts.config_path.empty()
                             ? ExperimentConfig{}
                             : parse_config_file(opts.config_path);
  if (opts.seed_set) cfg.master_seed = opts.seed;
  return cfg;
}

int cmd_trace(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  if (cfg.h_list.size() != 1)
    throw ConfigError("trace: config must specify a single h");
  SignalPolicy policy = classify(cfg.kL, cfg.kU, cfg.h_list[0]);
  RngStream rng(cfg.master_seed, 0);
  auto trace = run_dual(cfg.model, cfg.schedule, policy, rng);
  std::ostream* os;
  auto file = open_out(opts.out_path, os);
  write_trace_csv(*os, trace);
  return 0;
}

int cmd_simulate(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  SimulationSummary summary =
      simulate_experiment(cfg.model, cfg.kL, cfg.kU, cfg.h_list, cfg.schedule,
                          cfg.reps, cfg.master_seed, opts.threads);
  std::ostream* os;
  auto file = open_out(opts.out_path, os);
  *os << "t,h,false_rate,correct_rate,none_rate\n";
  for (const auto& s : summary.series) {
    for (std::size_t t = 0; t < s.false_rate.size(); ++t) {
      *os << (t + 1) << ',' << format_double(s.h) << ','
          << format_double(s.false_rate[t]) << ','
          << format_double(s.correct_rate[t]) << ','
          << format_double(s.none_rate[t]) << '\n';
    }
  }
  for (const auto& s : summary.series) {
    std::cerr << "h=" << format_double(s.h)
              << " total_false=" << format_double(s.total_false())
              << " total_correct=" << format_double(s.total_correct()) << '\n';
  }
  return 0;
}

struct ArlOpts {
  std::string side = "lower";
  std::string regime = "f0";
  std::string method = "markov";
  double k = 5.0;
  double target_arl = 0.0;
  int states = 100;
  std::int64_t reps = 10000;
  std::int64_t t_max = 1000000;
};

ArlQuery make_query(const CommonOpts& common, const ArlOpts& a) {
  ExperimentConfig cfg = load_config(common);
  ArlQuery q;
  q.pair = cfg.model;
  q.side = a.side == "lower" ? ChartSide::Lower : ChartSide::Upper;
  q.regime = regime_from(a.regime);
  q.k = a.k;
  q.method = a.method == "markov" ? ArlMethod::Markov : ArlMethod::MonteCarlo;
  q.states = a.states;
  q.reps = a.reps;
  q.t_max = a.t_max;
  q.master_seed = cfg.master_seed;
  q.threads = common.threads;
  return q;
}

int cmd_arl(const CommonOpts& common, const ArlOpts& a) {
  ArlQuery q = make_query(common, a);
  if (q.method == ArlMethod::Markov) {
    double arl = arl_markov(q);
    std::cout << "method=markov states=" << q.states
              << " k=" << format_double(q.k) << " arl=" << format_double(arl)
              << '\n';
  } else {
    ArlMcResult r = arl_mc(q);
    std::cout << "method=monte-carlo reps=" << q.reps
              << " k=" << format_double(q.k) << " arl=" << format_double(r.mean)
              << " std_error=" << format_double(r.std_error)
              << " censored=" << r.censored << '\n';
  }
  return 0;
}

int cmd_calibrate(const CommonOpts& common, const ArlOpts& a) {
  if (!(a.target_arl > 0)) throw ConfigError("calibrate: --target-arl required");
  ArlQuery q = make_query(common, a);
  double k = calibrate_threshold(q, a.target_arl);
  q.k = k;
  double achieved =
      q.method == ArlMethod::Markov ? arl_markov(q) : arl_mc(q).mean;
  std::cout << "method=" << a.method
            << (a.method == "markov" ? " states=" + std::to_string(q.states)
                                     : " reps=" + std::to_string(q.reps))
            << " target_arl=" << format_double(a.target_arl)
            << " k=" << format_double(k) << " arl=" << format_double(achieved)
            << '\n';
  return 0;
}

int cmd_couple(const CommonOpts& common, const std::string& regime, double h,
               std::int64_t reps, std::int64_t t_max) {
  ExperimentConfig cfg = load_config(common);
  CouplingStats stats =
      coupling_stats(cfg.model, h, regime_from(regime), reps, cfg.master_seed,
                     t_max, /*strict_censoring=*/false, common.threads);
  std::ostream* os;
  auto file = open_out(common.out_path, os);
  *os << "rep,T,nu_up,nu_down,censored\n";
  for (std::size_t r = 0; r < stats.samples.size(); ++r) {
    const auto& s = stats.samples[r];
    bool any_cens = s.T_censored || s.nu_up_censored || s.nu_down_censored;
    *os << r << ',' << s.T << ',' << s.nu_up << ',' << s.nu_down << ','
        << (any_cens ? 1 : 0) << '\n';
  }
  std::cerr << "mean_T=" << format_double(stats.mean_T())
            << " mean_nu_up=" << format_double(stats.mean_nu_up())
            << " mean_nu_down=" << format_double(stats.mean_nu_down())
            << " censored_T=" << stats.censored_T() << '\n';
  if (stats.censored_T() > 0)
    throw NumericError("couple: coupling time censored on some paths");
  return 0;
}

// The oracle property suite over small discrete tasks.
int cmd_verify() {
  DistributionPair pair =
      DistributionPair::discrete({-1.0, 1.0}, {0.7, 0.3}, {0.3, 0.7});
  RegimeSchedule pure_f0(10);
  RegimeSchedule change(10, {{4, 10, Regime::F1}});
  std::vector<SignalPolicy> policies = {classify(1.5, 1.5, 3.0),
                                        classify(1.5, 1.5, 2.5)};
  bool all_pass = true;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << '\n';
    all_pass = all_pass && ok;
  };

  for (const auto& policy : policies) {
    for (const auto& [sched_name, sched] :
         {std::pair{"pure-F0", &pure_f0}, std::pair{"change@4", &change}}) {
      std::string label =
          std::string(" (h=") + format_double(policy.h) + ", " + sched_name + ")";
      EnumerationTask task{pair, policy, *sched, 1};
      EnumerationResult exact = enumerate_exact(task);

      bool sums_ok = true;
      for (std::int64_t t = 0; t < sched->horizon(); ++t) {
        double s = exact.p_out[t] + exact.p_in[t] + exact.p_none[t];
        if (std::abs(s - 1.0) > 1e-12) sums_ok = false;
      }
      report("exact per-t rates sum to 1" + label, sums_ok);

      // Monte Carlo cross-check of the exact signal rates.
      const std::int64_t reps = 100000;
      SimulationSummary mc = simulate_experiment(pair, policy.kL, policy.kU,
                                                 {policy.h}, *sched, reps, 42);
      bool mc_ok = true;
      for (std::int64_t t = 0; t < sched->horizon(); ++t) {
        double p = exact.p_out[t];
        double se = std::sqrt(std::max(p * (1 - p), 1e-12) / reps);
        double sim_out =
            sched->at(t + 1) == Regime::F1
                ? mc.series[0].correct_rate[t]
                : mc.series[0].false_rate[t];
        if (std::abs(sim_out - p) > 3 * se + 1e-9) mc_ok = false;
      }
      report("exact vs Monte Carlo signal rates within 3 se" + label, mc_ok);

      bool incl_ok = true;
      for (std::int64_t n : {1, 2, 3, 5}) {
        InclusionReport r = verify_event_inclusion(task, n);
        if (r.counterexamples != 0) incl_ok = false;
      }
      report("stopping-time event inclusion, n in {1,2,3,5}" + label, incl_ok);
    }
  }
  if (!all_pass) throw NumericError("verify: some oracle properties failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-restarting dual CUSUM charts with an upper boundary"};
  app.require_subcommand(1);

  CommonOpts common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "experiment config (JSON)");
    sub->add_option("--out", common.out_path, "output CSV path (default: stdout)");
    sub->add_option("--seed", common.seed, "master seed (overrides config)")
        ->each([&](const std::string&) { common.seed_set = true; });
    sub->add_option("--threads", common.threads, "worker thread cap")
        ->check(CLI::PositiveNumber);
  };

  auto* trace = app.add_subcommand("trace", "per-step chart trace CSV");
  add_common(trace);

  auto* simulate = app.add_subcommand(
      "simulate", "multi-replication experiment, pointwise signal rates");
  add_common(simulate);

  ArlOpts arl_opts;
  auto add_arl = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--side", arl_opts.side, "chart side")
        ->check(CLI::IsMember({"lower", "upper"}));
    sub->add_option("--regime", arl_opts.regime, "observation regime")
        ->check(CLI::IsMember({"f0", "f1", "F0", "F1"}));
    sub->add_option("--method", arl_opts.method, "ARL method")
        ->check(CLI::IsMember({"markov", "mc"}));
    sub->add_option("--states", arl_opts.states, "Markov chain states");
    sub->add_option("--reps", arl_opts.reps, "Monte Carlo replications");
    sub->add_option("--t-max", arl_opts.t_max, "censoring horizon");
  };

  auto* arl = app.add_subcommand("arl", "average run length for a threshold");
  add_arl(arl);
  arl->add_option("--k", arl_opts.k, "threshold");

  auto* calibrate =
      app.add_subcommand("calibrate", "threshold for a target run length");
  add_arl(calibrate);
  calibrate->add_option("--target-arl", arl_opts.target_arl, "target ARL");

  std::string couple_regime = "f1";
  double couple_h = 10.0;
  std::int64_t couple_reps = 10000;
  std::int64_t couple_t_max = 10000;
  auto* couple = app.add_subcommand("couple", "coupling time statistics");
  couple->set_help_flag("--help", "print help");  // frees -h for the boundary
  add_common(couple);
  couple->add_option("--regime", couple_regime, "pure regime")
      ->check(CLI::IsMember({"f0", "f1", "F0", "F1"}));
  couple->add_option("--h", couple_h, "upper boundary");
  couple->add_option("--reps", couple_reps, "replications");
  couple->add_option("--t-max", couple_t_max, "censoring horizon");

  auto* verify =
      app.add_subcommand("verify", "run the exhaustive-enumeration suite");
  (void)verify;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (trace->parsed()) return cmd_trace(common);
    if (simulate->parsed()) return cmd_simulate(common);
    if (arl->parsed()) return cmd_arl(common, arl_opts);
    if (calibrate->parsed()) return cmd_calibrate(common, arl_opts);
    if (couple->parsed())
      return cmd_couple(common, couple_regime, couple_h, couple_reps,
                        couple_t_max);
    if (verify->parsed()) return cmd_verify();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
