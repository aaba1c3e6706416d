#include "cusum/trace.hpp"

#include <charconv>
#include <system_error>

namespace cusum {

std::vector<TraceRow> run_dual(const DistributionPair& pair,
                               const RegimeSchedule& schedule,
                               const SignalPolicy& policy, RngStream& rng) {
  std::vector<TraceRow> trace;
  trace.reserve(static_cast<std::size_t>(schedule.horizon()));
  DualChartState state = DualChartState::initial(policy.h);
  bool coupled = false;
  for (std::int64_t t = 1; t <= schedule.horizon(); ++t) {
    double x = pair.sample(schedule.at(t), rng);
    state = dual_step(state, pair.log_lr(x));
    coupled = coupled || state.coupled();
    trace.push_back({t, x, state.rL, state.rU, signal_of_state(state, policy),
                     coupled});
  }
  return trace;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  os << "t,x,rL,rU,signal,coupled\n";
  for (const auto& row : trace) {
    os << row.t << ',' << format_double(row.x) << ',' << format_double(row.rL)
       << ',' << format_double(row.rU) << ',' << to_char(row.signal) << ','
       << (row.coupled ? 1 : 0) << '\n';
  }
}

}  // namespace cusum
