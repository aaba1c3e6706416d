#include "cusum/simulation.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "cusum/charts.hpp"
#include "cusum/errors.hpp"

namespace cusum {

namespace {

void run_chunked(std::int64_t reps, int threads,
                 const std::function<void(std::int64_t, std::int64_t)>& worker) {
  int n = std::max(1, threads);
  if (n == 1 || reps < 2 * n) {
    worker(0, reps);
    return;
  }
  std::vector<std::thread> pool;
  std::int64_t chunk = (reps + n - 1) / n;
  for (int i = 0; i < n; ++i) {
    std::int64_t lo = i * chunk;
    std::int64_t hi = std::min(reps, lo + chunk);
    if (lo < hi) pool.emplace_back(worker, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

double SimulationSummary::Series::total_false() const {
  return std::accumulate(false_rate.begin(), false_rate.end(), 0.0);
}

double SimulationSummary::Series::total_correct() const {
  return std::accumulate(correct_rate.begin(), correct_rate.end(), 0.0);
}

SimulationSummary simulate_experiment(const DistributionPair& pair, double kL,
                                      double kU,
                                      const std::vector<double>& h_list,
                                      const RegimeSchedule& schedule,
                                      std::int64_t reps,
                                      std::uint64_t master_seed, int threads) {
  if (h_list.empty()) throw ConfigError("simulate: need at least one h value");
  if (reps < 1) throw ConfigError("simulate: reps must be >= 1");
  std::vector<SignalPolicy> policies;
  policies.reserve(h_list.size());
  for (double h : h_list) policies.push_back(classify(kL, kU, h));

  const std::int64_t horizon = schedule.horizon();
  const std::size_t nh = h_list.size();

  // Integer tallies per (h, t, label); integer sums are order-independent,
  // so the summary is bit-identical for any thread count.
  std::vector<std::vector<std::int64_t>> n_false(nh), n_correct(nh), n_none(nh);
  for (std::size_t i = 0; i < nh; ++i) {
    n_false[i].assign(horizon, 0);
    n_correct[i].assign(horizon, 0);
    n_none[i].assign(horizon, 0);
  }

  struct Tally {
    std::vector<std::vector<std::int64_t>> f, c, n;
  };

  std::mutex mu;
  auto worker = [&](std::int64_t lo, std::int64_t hi) {
    Tally local;
    local.f.assign(nh, std::vector<std::int64_t>(horizon, 0));
    local.c.assign(nh, std::vector<std::int64_t>(horizon, 0));
    local.n.assign(nh, std::vector<std::int64_t>(horizon, 0));
    std::vector<double> increments(static_cast<std::size_t>(horizon));
    std::vector<DualChartState> states(nh);

    for (std::int64_t r = lo; r < hi; ++r) {
      RngStream rng(master_seed, static_cast<std::uint64_t>(r));
      for (std::int64_t t = 1; t <= horizon; ++t)
        increments[t - 1] = pair.log_lr(pair.sample(schedule.at(t), rng));
      for (std::size_t i = 0; i < nh; ++i)
        states[i] = DualChartState::initial(h_list[i]);

      for (std::int64_t t = 1; t <= horizon; ++t) {
        Regime truth = schedule.at(t);
        for (std::size_t i = 0; i < nh; ++i) {
          states[i] = dual_step(states[i], increments[t - 1]);
          SignalValue z = signal_of_state(states[i], policies[i]);
          if (z == SignalValue::NoSignal) {
            ++local.n[i][t - 1];
          } else {
            bool says_out = z == SignalValue::OutOfControl;
            bool is_out = truth == Regime::F1;
            if (says_out == is_out)
              ++local.c[i][t - 1];
            else
              ++local.f[i][t - 1];
          }
        }
      }
    }

    std::lock_guard<std::mutex> lock(mu);
    for (std::size_t i = 0; i < nh; ++i) {
      for (std::int64_t t = 0; t < horizon; ++t) {
        n_false[i][t] += local.f[i][t];
        n_correct[i][t] += local.c[i][t];
        n_none[i][t] += local.n[i][t];
      }
    }
  };
  run_chunked(reps, threads, worker);

  SimulationSummary summary;
  summary.reps = reps;
  summary.master_seed = master_seed;
  for (std::size_t i = 0; i < nh; ++i) {
    SimulationSummary::Series s;
    s.h = h_list[i];
    s.false_rate.resize(horizon);
    s.correct_rate.resize(horizon);
    s.none_rate.resize(horizon);
    for (std::int64_t t = 0; t < horizon; ++t) {
      double d = static_cast<double>(reps);
      s.false_rate[t] = n_false[i][t] / d;
      s.correct_rate[t] = n_correct[i][t] / d;
      s.none_rate[t] = n_none[i][t] / d;
    }
    summary.series.push_back(std::move(s));
  }
  return summary;
}

RunLengthEstimates empirical_run_length_criteria(
    const DistributionPair& pair, const SignalPolicy& policy, std::int64_t n,
    Regime pre_change, int j, std::int64_t reps, std::uint64_t master_seed,
    std::int64_t t_max, bool strict_censoring) {
  if (n < 1) throw ConfigError("run-length criteria: n must be >= 1");
  if (j != 0 && j != 1) throw ConfigError("run-length criteria: j in {0,1}");
  if (reps < 1) throw ConfigError("run-length criteria: reps must be >= 1");
  Regime post = j == 1 ? Regime::F1 : Regime::F0;
  SignalValue target =
      j == 1 ? SignalValue::OutOfControl : SignalValue::InControl;

  std::vector<double> delay_n, delay_1;
  delay_n.reserve(reps);
  delay_1.reserve(reps);
  std::int64_t ineq = 0, censored = 0;

  for (std::int64_t r = 0; r < reps; ++r) {
    RngStream rng(master_seed, static_cast<std::uint64_t>(r));
    DualChartState state = DualChartState::initial(policy.h);
    std::int64_t tau1 = -1, taun = -1;
    for (std::int64_t t = 1; t <= t_max && taun < 0; ++t) {
      Regime regime = t < n ? pre_change : post;
      state = dual_step(state, pair.log_lr(pair.sample(regime, rng)));
      if (signal_of_state(state, policy) == target) {
        if (tau1 < 0) tau1 = t;
        if (t >= n) taun = t;
      }
    }
    if (taun < 0) {
      ++censored;
      if (strict_censoring)
        throw NumericError("run-length criteria: path censored at t_max");
      continue;
    }
    double dn = static_cast<double>(taun - n + 1);
    double d1 = std::max<double>(0.0, static_cast<double>(tau1 - n + 1));
    delay_n.push_back(dn);
    delay_1.push_back(d1);
    if (d1 <= dn) ++ineq;
  }

  auto mean_se = [](const std::vector<double>& xs) {
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
                  static_cast<double>(xs.size());
    double se = std::numeric_limits<double>::quiet_NaN();
    if (xs.size() > 1) {
      double ss = 0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      se = std::sqrt(ss / (xs.size() - 1.0) / xs.size());
    }
    return std::pair<double, double>(mean, se);
  };
  auto [mn, sn] = mean_se(delay_n);
  auto [m1, s1] = mean_se(delay_1);
  return {mn, sn, m1, s1, ineq, reps, censored};
}

std::int64_t CouplingStats::censored_T() const {
  std::int64_t c = 0;
  for (const auto& s : samples) c += s.T_censored ? 1 : 0;
  return c;
}

namespace {
double mean_uncensored(const std::vector<CouplingStats::PathSample>& samples,
                       std::int64_t CouplingStats::PathSample::* field,
                       bool CouplingStats::PathSample::* cens) {
  double sum = 0;
  std::int64_t n = 0;
  for (const auto& s : samples) {
    if (!(s.*cens)) {
      sum += static_cast<double>(s.*field);
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n)
           : std::numeric_limits<double>::quiet_NaN();
}
}  // namespace

double CouplingStats::mean_T() const {
  return mean_uncensored(samples, &PathSample::T, &PathSample::T_censored);
}
double CouplingStats::mean_nu_up() const {
  return mean_uncensored(samples, &PathSample::nu_up,
                         &PathSample::nu_up_censored);
}
double CouplingStats::mean_nu_down() const {
  return mean_uncensored(samples, &PathSample::nu_down,
                         &PathSample::nu_down_censored);
}

std::int64_t CouplingStats::count_nu_down_before_nu_up() const {
  std::int64_t c = 0;
  for (const auto& s : samples) {
    if (s.nu_down_censored) continue;
    if (s.nu_up_censored || s.nu_down < s.nu_up) ++c;
  }
  return c;
}

std::int64_t CouplingStats::count_nu_up_before_nu_down() const {
  std::int64_t c = 0;
  for (const auto& s : samples) {
    if (s.nu_up_censored) continue;
    if (s.nu_down_censored || s.nu_up < s.nu_down) ++c;
  }
  return c;
}

CouplingStats coupling_stats(const DistributionPair& pair, double h,
                             Regime regime, std::int64_t reps,
                             std::uint64_t master_seed, std::int64_t t_max,
                             bool strict_censoring, int threads) {
  if (!(h > 0)) throw ConfigError("coupling: h must be > 0");
  if (reps < 1) throw ConfigError("coupling: reps must be >= 1");

  CouplingStats stats;
  stats.t_max = t_max;
  stats.samples.resize(static_cast<std::size_t>(reps));

  auto worker = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      RngStream rng(master_seed, static_cast<std::uint64_t>(r));
      DualChartState state = DualChartState::initial(h);
      std::int64_t T = -1, up = -1, down = -1;
      for (std::int64_t t = 1; t <= t_max; ++t) {
        state = dual_step(state, pair.log_lr(pair.sample(regime, rng)));
        if (up < 0 && state.rL == h) up = t;
        if (down < 0 && state.rU == 0.0) down = t;
        if (T < 0 && state.coupled()) T = t;
        if (T >= 0 && up >= 0 && down >= 0) break;
      }
      stats.samples[static_cast<std::size_t>(r)] = {
          T < 0 ? t_max : T,       T < 0,
          up < 0 ? t_max : up,     up < 0,
          down < 0 ? t_max : down, down < 0};
    }
  };
  run_chunked(reps, threads, worker);

  if (strict_censoring && stats.censored_T() > 0)
    throw NumericError("coupling: coupling time censored on " +
                       std::to_string(stats.censored_T()) + " paths");
  return stats;
}

}  // namespace cusum
