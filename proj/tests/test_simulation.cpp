#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cusum/calibration.hpp"
#include "cusum/simulation.hpp"

using namespace cusum;

namespace {

DistributionPair std_pair() { return DistributionPair::gaussian(-0.5, 0.5, 1.0); }

RegimeSchedule paper_schedule() {
  return RegimeSchedule(75, {{16, 35, Regime::F1}, {51, 60, Regime::F1}});
}

}  // namespace

TEST_CASE("rates partition to 1 pointwise and reps=1 gives indicators") {
  auto pair = std_pair();
  auto summary = simulate_experiment(pair, 5, 5, {6, 8, 10}, paper_schedule(),
                                     500, 11);
  for (const auto& s : summary.series) {
    for (std::size_t t = 0; t < s.false_rate.size(); ++t) {
      double sum = s.false_rate[t] + s.correct_rate[t] + s.none_rate[t];
      REQUIRE(std::abs(sum - 1.0) <= 1e-12);
    }
  }

  auto single = simulate_experiment(pair, 5, 5, {10}, paper_schedule(), 1, 3);
  for (std::size_t t = 0; t < single.series[0].false_rate.size(); ++t) {
    for (double v : {single.series[0].false_rate[t],
                     single.series[0].correct_rate[t],
                     single.series[0].none_rate[t]}) {
      REQUIRE((v == 0.0 || v == 1.0));
    }
  }
}

TEST_CASE("summary independent of thread count") {
  auto pair = std_pair();
  auto a = simulate_experiment(pair, 5, 5, {6, 10}, paper_schedule(), 2000, 4, 1);
  auto b = simulate_experiment(pair, 5, 5, {6, 10}, paper_schedule(), 2000, 4, 4);
  auto c = simulate_experiment(pair, 5, 5, {6, 10}, paper_schedule(), 2000, 4, 7);
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    for (std::size_t t = 0; t < a.series[i].false_rate.size(); ++t) {
      REQUIRE(a.series[i].false_rate[t] == b.series[i].false_rate[t]);
      REQUIRE(a.series[i].correct_rate[t] == c.series[i].correct_rate[t]);
      REQUIRE(a.series[i].none_rate[t] == b.series[i].none_rate[t]);
    }
  }
}

TEST_CASE("all-in-control schedule: false mass consistent with the ARL scale") {
  auto pair = std_pair();
  const std::int64_t horizon = 2000;
  RegimeSchedule all_f0(horizon);
  auto summary = simulate_experiment(pair, 5, 5, {10}, all_f0, 2000, 21);
  double total_false = summary.series[0].total_false();

  // The chart does not restart, so every excursion above the threshold
  // contributes one false step per step of sojourn: the per-step false rate
  // is (mean sojourn)/(mean cycle), bounded below by the ARL reciprocal and
  // above it by the mean sojourn length (a small constant, ~3.4 here).
  ArlQuery q;
  q.pair = pair;
  q.k = 5.0;
  q.states = 200;
  double arl = arl_markov(q);
  double per_step = total_false / static_cast<double>(horizon);
  CHECK(per_step > 0.5 / arl);
  CHECK(per_step < 10.0 / arl);
  CHECK(summary.series[0].false_rate[0] == 0.0);  // cannot signal falsely at t=1
}

TEST_CASE("invalid h in sweep rejected") {
  auto pair = std_pair();
  CHECK_THROWS_AS(
      simulate_experiment(pair, 5, 5, {4.0}, paper_schedule(), 10, 1),
      ConfigError);
}

TEST_CASE("run-length criteria: n=1 identity and pointwise inequality") {
  auto pair = std_pair();
  SignalPolicy policy = classify(3, 3, 6);
  auto est1 = empirical_run_length_criteria(pair, policy, 1, Regime::F0, 1,
                                            2000, 9, 100000);
  CHECK(est1.mean_tau_n == doctest::Approx(est1.mean_tau_1_plus).epsilon(1e-12));
  CHECK(est1.inequality_holds == est1.reps);

  auto est5 = empirical_run_length_criteria(pair, policy, 5, Regime::F0, 1,
                                            2000, 9, 100000);
  CHECK(est5.inequality_holds == est5.reps);  // 100% of paths
  CHECK(est5.censored == 0);

  // starting lower (pre-change F0) weakly lengthens the delay to signal 1
  auto pre_f1 = empirical_run_length_criteria(pair, policy, 5, Regime::F1, 1,
                                              2000, 9, 100000);
  CHECK(est5.mean_tau_n >= pre_f1.mean_tau_n);
}

TEST_CASE("run-length criteria: j=0 side") {
  auto pair = std_pair();
  SignalPolicy policy = classify(3, 3, 6);
  auto est = empirical_run_length_criteria(pair, policy, 3, Regime::F1, 0,
                                           2000, 13, 100000);
  CHECK(est.inequality_holds == est.reps);
  CHECK(est.mean_tau_n >= 1.0);
}

TEST_CASE("coupling stats: identity, orderings, small h couples fast") {
  auto pair = std_pair();
  auto f1 = coupling_stats(pair, 10.0, Regime::F1, 2000, 15, 10000,
                           /*strict_censoring=*/false);
  for (const auto& s : f1.samples) {
    if (!s.T_censored) {
      std::int64_t up = s.nu_up_censored ? f1.t_max + 1 : s.nu_up;
      std::int64_t down = s.nu_down_censored ? f1.t_max + 1 : s.nu_down;
      REQUIRE(s.T == std::min(up, down));
    }
  }
  CHECK(f1.censored_T() == 0);
  CHECK(f1.mean_T() <= f1.mean_nu_up());
  CHECK(f1.count_nu_down_before_nu_up() < f1.samples.size() / 100.0);

  auto f0 = coupling_stats(pair, 10.0, Regime::F0, 2000, 15, 10000, false);
  CHECK(f0.mean_T() <= f0.mean_nu_down());
  CHECK(f0.count_nu_up_before_nu_down() < f0.samples.size() / 100.0);

  auto tiny = coupling_stats(pair, 0.5, Regime::F0, 2000, 15, 10000);
  CHECK(tiny.mean_T() < 5.0);
}
