#pragma once

#include <cstdint>
#include <vector>

#include "cusum/distributions.hpp"
#include "cusum/schedule.hpp"
#include "cusum/signals.hpp"

namespace cusum {

// Pointwise-in-time averages over replications, one series per h value.
// All h values of a replication are driven by the same observations
// (common random numbers).
struct SimulationSummary {
  struct Series {
    double h;
    std::vector<double> false_rate;    // index t-1
    std::vector<double> correct_rate;
    std::vector<double> none_rate;

    double total_false() const;
    double total_correct() const;
  };

  std::vector<Series> series;
  std::int64_t reps = 0;
  std::uint64_t master_seed = 0;
};

SimulationSummary simulate_experiment(const DistributionPair& pair, double kL,
                                      double kU,
                                      const std::vector<double>& h_list,
                                      const RegimeSchedule& schedule,
                                      std::int64_t reps,
                                      std::uint64_t master_seed,
                                      int threads = 1);

// Scenario-conditional Monte Carlo estimates of the detection-delay
// criteria: mean of (tau_n^j - n + 1) and of [tau_1^j - n + 1]^+, for the
// regime that is F_pre before the change point n and F_j from n onward.
struct RunLengthEstimates {
  double mean_tau_n;        // mean of tau_n^j - n + 1
  double se_tau_n;
  double mean_tau_1_plus;   // mean of [tau_1^j - n + 1]^+
  double se_tau_1_plus;
  std::int64_t inequality_holds;  // paths with [tau_1-n+1]^+ <= tau_n-n+1
  std::int64_t reps;
  std::int64_t censored;
};

RunLengthEstimates empirical_run_length_criteria(
    const DistributionPair& pair, const SignalPolicy& policy, std::int64_t n,
    Regime pre_change, int j, std::int64_t reps, std::uint64_t master_seed,
    std::int64_t t_max, bool strict_censoring = true);

// Coupling time T = first t with rL == rU, plus the boundary hitting times
// nu_up (rL reaches h) and nu_down (rU reaches 0), per replication.
struct CouplingStats {
  struct PathSample {
    std::int64_t T;
    bool T_censored;
    std::int64_t nu_up;
    bool nu_up_censored;
    std::int64_t nu_down;
    bool nu_down_censored;
  };

  std::vector<PathSample> samples;
  std::int64_t t_max = 0;

  std::int64_t censored_T() const;
  // Means over uncensored paths; NaN when all are censored.
  double mean_T() const;
  double mean_nu_up() const;
  double mean_nu_down() const;
  // Censored hitting times compare as +infinity.
  std::int64_t count_nu_down_before_nu_up() const;
  std::int64_t count_nu_up_before_nu_down() const;
};

CouplingStats coupling_stats(const DistributionPair& pair, double h,
                             Regime regime, std::int64_t reps,
                             std::uint64_t master_seed, std::int64_t t_max,
                             bool strict_censoring = true, int threads = 1);

}  // namespace cusum
