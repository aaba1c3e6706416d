#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "cusum/charts.hpp"
#include "cusum/schedule.hpp"
#include "cusum/signals.hpp"

namespace cusum {

struct TraceRow {
  std::int64_t t;
  double x;
  double rL;
  double rU;
  SignalValue signal;
  bool coupled;
};

// Full per-step trace of the dual chart over the schedule horizon.
// coupled is set from the first step with rL == rU onward.
std::vector<TraceRow> run_dual(const DistributionPair& pair,
                               const RegimeSchedule& schedule,
                               const SignalPolicy& policy, RngStream& rng);

// CSV with header `t,x,rL,rU,signal,coupled`; signal in {0,1,-}.
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace cusum
