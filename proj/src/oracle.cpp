#include "cusum/oracle.hpp"

#include <cmath>

#include "cusum/charts.hpp"
#include "cusum/errors.hpp"

namespace cusum {

namespace {

void check_task(const EnumerationTask& task) {
  if (!task.pair.is_discrete())
    throw ConfigError("oracle: model must be discrete-finite");
  std::size_t s = task.pair.support().size();
  if (s > 3) throw ConfigError("oracle: support size must be <= 3");
  double paths = std::pow(static_cast<double>(s),
                          static_cast<double>(task.schedule.horizon()));
  if (paths > 5e6) throw ConfigError("oracle: path count exceeds 5e6");
}

}  // namespace

EnumerationResult enumerate_exact(const EnumerationTask& task) {
  check_task(task);
  const std::int64_t horizon = task.schedule.horizon();
  const auto& support = task.pair.support();
  const std::size_t s = support.size();

  std::vector<double> log_lr(s);
  for (std::size_t i = 0; i < s; ++i) log_lr[i] = task.pair.log_lr(support[i]);

  EnumerationResult res;
  res.p_out.assign(horizon, 0.0);
  res.p_in.assign(horizon, 0.0);
  res.p_none.assign(horizon, 0.0);

  struct Frame {
    DualChartState state;
    double prob;
    std::int64_t tau_out, tau_in;  // tau_n^j within horizon, -1 = not yet
    std::int64_t couple_t;         // -1 = not coupled
    double couple_value;
  };

  // Depth-first walk of the path tree; statistics accumulate at each node
  // (per-t signal mass) and at the leaves (expectations).
  auto visit = [&](auto&& self, const Frame& f, std::int64_t depth) -> void {
    if (depth == horizon) {
      res.e_tau_out += f.prob * static_cast<double>(
                                    f.tau_out >= 0 ? f.tau_out : horizon);
      res.e_tau_in +=
          f.prob * static_cast<double>(f.tau_in >= 0 ? f.tau_in : horizon);
      if (f.couple_t >= 0) {
        res.p_coupled += f.prob;
        if (f.couple_value == task.policy.h) res.p_coupled_at_h += f.prob;
      }
      return;
    }
    std::int64_t t = depth + 1;
    const auto& p = task.pair.probs(task.schedule.at(t));
    for (std::size_t i = 0; i < s; ++i) {
      if (p[i] == 0.0) continue;
      Frame g = f;
      g.prob = f.prob * p[i];
      g.state = dual_step(f.state, log_lr[i]);
      SignalValue z = signal_of_state(g.state, task.policy);
      if (z == SignalValue::OutOfControl) {
        res.p_out[depth] += g.prob;
        if (g.tau_out < 0 && t >= task.n) g.tau_out = t;
      } else if (z == SignalValue::InControl) {
        res.p_in[depth] += g.prob;
        if (g.tau_in < 0 && t >= task.n) g.tau_in = t;
      } else {
        res.p_none[depth] += g.prob;
      }
      if (g.couple_t < 0 && g.state.coupled()) {
        g.couple_t = t;
        g.couple_value = g.state.rL;
      }
      self(self, g, depth + 1);
    }
  };

  Frame root{DualChartState::initial(task.policy.h), 1.0, -1, -1, -1, 0.0};
  visit(visit, root, 0);
  // min(tau, horizon): censored taus already contribute horizon above.
  return res;
}

InclusionReport verify_event_inclusion(const EnumerationTask& task,
                                       std::int64_t n) {
  check_task(task);
  const std::int64_t horizon = task.schedule.horizon();
  if (n < 1 || n > horizon)
    throw ConfigError("oracle: n must lie in [1, horizon]");
  const auto& support = task.pair.support();
  const std::size_t s = support.size();
  std::vector<double> log_lr(s);
  for (std::size_t i = 0; i < s; ++i) log_lr[i] = task.pair.log_lr(support[i]);

  InclusionReport report;

  struct Frame {
    DualChartState state;
    std::int64_t tau1[2], taun[2];  // index j in {0,1}; -1 = not yet
  };
  std::vector<int> path(static_cast<std::size_t>(horizon), 0);

  auto visit = [&](auto&& self, const Frame& f, std::int64_t depth) -> void {
    if (depth == horizon) {
      ++report.paths_checked;
      for (int j = 0; j < 2; ++j) {
        if (f.tau1[j] < 0) continue;  // event not realized within horizon
        std::int64_t m = f.tau1[j] - n + 1;
        if (m < 1) continue;          // the positive part is 0
        bool ok = f.taun[j] >= 0 && f.taun[j] - n + 1 == m;
        if (!ok) {
          ++report.counterexamples;
          if (report.first_counterexample.empty())
            report.first_counterexample = path;
        }
      }
      return;
    }
    std::int64_t t = depth + 1;
    const auto& p = task.pair.probs(task.schedule.at(t));
    for (std::size_t i = 0; i < s; ++i) {
      if (p[i] == 0.0) continue;
      Frame g = f;
      g.state = dual_step(f.state, log_lr[i]);
      SignalValue z = signal_of_state(g.state, task.policy);
      int j = -1;
      if (z == SignalValue::OutOfControl) j = 1;
      if (z == SignalValue::InControl) j = 0;
      if (j >= 0) {
        if (g.tau1[j] < 0) g.tau1[j] = t;
        if (g.taun[j] < 0 && t >= n) g.taun[j] = t;
      }
      path[static_cast<std::size_t>(depth)] = static_cast<int>(i);
      self(self, g, depth + 1);
    }
  };

  Frame root{DualChartState::initial(task.policy.h), {-1, -1}, {-1, -1}};
  visit(visit, root, 0);
  return report;
}

}  // namespace cusum
