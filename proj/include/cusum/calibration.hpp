#pragma once

#include <cstdint>

#include "cusum/distributions.hpp"

namespace cusum {

enum class ChartSide { Lower, Upper };
enum class ArlMethod { Markov, MonteCarlo };

// One average-run-length evaluation. The lower side is driven by log lr
// increments, the upper side by their negation (magnitude convention); the
// classic unbounded chart is used throughout, which matches the bounded
// chart's hitting time whenever h >= k.
struct ArlQuery {
  DistributionPair pair = DistributionPair::gaussian(-0.5, 0.5, 1.0);
  ChartSide side = ChartSide::Lower;
  Regime regime = Regime::F0;
  double k = 0;
  ArlMethod method = ArlMethod::Markov;
  int states = 100;                 // Markov: number of transient cells
  std::int64_t reps = 10000;        // Monte Carlo
  std::int64_t t_max = 1000000;
  std::uint64_t master_seed = 1;
  bool strict_censoring = true;     // any censored path aborts
  int threads = 1;
};

// Brook-Evans approximation: [0, k) split into `states` equal cells with
// midpoint representatives, reflection mass lumped into cell 0, absorption
// above k; expected absorption time from the cell containing 0.
double arl_markov(const ArlQuery& query);

struct ArlMcResult {
  double mean;
  double std_error;  // NaN when reps == 1
  std::int64_t censored;
};

ArlMcResult arl_mc(const ArlQuery& query);

// Smallest k whose ARL meets target_arl, by bisection over an auto-expanded
// bracket. The query's k is ignored; its method/states/reps are used for
// the ARL evaluations.
double calibrate_threshold(const ArlQuery& query, double target_arl);

}  // namespace cusum
