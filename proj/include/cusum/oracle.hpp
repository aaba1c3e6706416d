#pragma once

#include <cstdint>
#include <vector>

#include "cusum/distributions.hpp"
#include "cusum/schedule.hpp"
#include "cusum/signals.hpp"

namespace cusum {

// Exhaustive enumeration over tiny discrete models: exact ground truth for
// the sampled statistics. The discrete log-LR has atoms (the paper assumes
// none); ties at a threshold resolve by the weak inequalities of the signal
// definition, matching the simulated charts exactly.
struct EnumerationTask {
  DistributionPair pair;  // discrete-finite, support size <= 3
  SignalPolicy policy;
  RegimeSchedule schedule;  // horizon <= 14
  std::int64_t n = 1;       // change point used for the tau statistics
};

struct EnumerationResult {
  // Exact signal distribution at each t in [1, horizon].
  std::vector<double> p_out, p_in, p_none;
  // Exact E[min(tau_n^j, horizon)] for the configured n.
  double e_tau_out = 0;
  double e_tau_in = 0;
  // Exact coupling probabilities within the horizon.
  double p_coupled = 0;
  double p_coupled_at_h = 0;
};

EnumerationResult enumerate_exact(const EnumerationTask& task);

struct InclusionReport {
  std::int64_t paths_checked = 0;
  std::int64_t counterexamples = 0;  // expected: 0
  // First offending path as support indices, empty when none.
  std::vector<int> first_counterexample;
};

// Checks, for every path and both j in {0,1}: whenever [tau_1^j - n + 1]^+
// equals some m >= 1 realized within the horizon, tau_n^j - n + 1 equals
// the same m.
InclusionReport verify_event_inclusion(const EnumerationTask& task,
                                       std::int64_t n);

}  // namespace cusum
