#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cusum/distributions.hpp"
#include "cusum/errors.hpp"

using namespace cusum;

namespace {

DistributionPair std_pair() { return DistributionPair::gaussian(-0.5, 0.5, 1.0); }

DistributionPair coin_pair() {
  return DistributionPair::discrete({-1.0, 1.0}, {0.7, 0.3}, {0.3, 0.7});
}

// Independent route: log ratio of the two normal densities evaluated
// directly.
double gaussian_log_lr_direct(double mu0, double mu1, double sigma, double x) {
  auto log_pdf = [&](double mu) {
    double z = (x - mu) / sigma;
    return -0.5 * z * z - std::log(sigma * std::sqrt(2 * std::numbers::pi));
  };
  return log_pdf(mu1) - log_pdf(mu0);
}

}  // namespace

TEST_CASE("normal_cdf matches high-precision reference values") {
  // Reference values computed to 20 digits with arbitrary-precision
  // arithmetic.
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(normal_cdf(0.5) - 0.69146246127401310364) < 1e-12);
  CHECK(std::abs(normal_cdf(1.0) - 0.84134474606854294859) < 1e-12);
  CHECK(std::abs(normal_cdf(1.96) - 0.97500210485177956379) < 1e-12);
  CHECK(std::abs(normal_cdf(2.0) - 0.9772498680518207928) < 1e-12);
  CHECK(std::abs(normal_cdf(3.0) - 0.99865010196836990547) < 1e-12);
  CHECK(std::abs(normal_cdf(-1.0) - 0.15865525393145705141) < 1e-12);
  CHECK(std::abs(normal_cdf(-3.0) - 0.0013498980316300945267) < 1e-12);
  CHECK(std::abs(normal_cdf(-5.0) - 2.8665157187919391167e-7) < 1e-12);
}

TEST_CASE("gaussian log_lr") {
  auto p = std_pair();
  CHECK(p.log_lr(0.7) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(p.log_lr(0.7) ==
        doctest::Approx(gaussian_log_lr_direct(-0.5, 0.5, 1.0, 0.7))
            .epsilon(1e-10));

  auto q = DistributionPair::gaussian(0.0, 2.0, 1.0);
  CHECK(q.log_lr(1.0) == doctest::Approx(0.0).epsilon(1e-12));  // midpoint

  // closed form vs direct density evaluation on a grid, assorted params
  for (auto [mu0, mu1, sigma] : {std::tuple{-0.5, 0.5, 1.0},
                                 std::tuple{1.0, 3.0, 2.0},
                                 std::tuple{2.0, -1.0, 0.5}}) {
    auto pair = DistributionPair::gaussian(mu0, mu1, sigma);
    for (double x = -5; x <= 5; x += 0.37) {
      CHECK(pair.log_lr(x) ==
            doctest::Approx(gaussian_log_lr_direct(mu0, mu1, sigma, x))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("discrete log_lr and domain errors") {
  auto p = coin_pair();
  CHECK(p.log_lr(1.0) ==
        doctest::Approx(0.84729786038720361371).epsilon(1e-14));
  CHECK(p.log_lr(-1.0) ==
        doctest::Approx(-0.84729786038720361371).epsilon(1e-14));
  CHECK_THROWS_AS(p.log_lr(0.5), std::domain_error);
}

TEST_CASE("invalid model parameters rejected") {
  CHECK_THROWS_AS(DistributionPair::gaussian(0, 0, 1), ConfigError);
  CHECK_THROWS_AS(DistributionPair::gaussian(0, 1, 0), ConfigError);
  CHECK_THROWS_AS(DistributionPair::discrete({0, 1}, {0.5, 0.5}, {1.0, 0.0}),
                  ConfigError);  // support mismatch
  CHECK_THROWS_AS(DistributionPair::discrete({0, 1}, {0.6, 0.6}, {0.5, 0.5}),
                  ConfigError);  // does not sum to 1
}

TEST_CASE("sampling: determinism and law of large numbers") {
  auto p = std_pair();
  RngStream a(12345, 7), b(12345, 7), c(12345, 8);
  bool identical = true, distinct = false;
  for (int i = 0; i < 100; ++i) {
    double xa = p.sample(Regime::F0, a);
    double xb = p.sample(Regime::F0, b);
    double xc = p.sample(Regime::F0, c);
    identical = identical && xa == xb;
    distinct = distinct || xa != xc;
  }
  CHECK(identical);
  CHECK(distinct);

  RngStream rng(99, 0);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += p.sample(Regime::F0, rng);
  CHECK(std::abs(sum / n - (-0.5)) < 0.02);

  auto d = coin_pair();
  RngStream rng2(99, 1);
  for (int i = 0; i < 1000; ++i) {
    double x = d.sample(Regime::F1, rng2);
    CHECK((x == -1.0 || x == 1.0));
  }
}

TEST_CASE("increment_cdf examples") {
  auto p = std_pair();
  // log lr(X) = X here, so the median sits at the regime mean
  CHECK(p.increment_cdf(Regime::F0, -0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.increment_cdf(Regime::F1, 0.5) == doctest::Approx(0.5).epsilon(1e-12));

  auto d = coin_pair();
  CHECK(d.increment_cdf(Regime::F0, 0.0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(d.increment_cdf(Regime::F1, 0.0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(d.neg_increment_cdf(Regime::F0, 0.0) ==
        doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("increment_cdf: monotone, correct limits, atomless for gaussian") {
  auto p = std_pair();
  for (Regime r : {Regime::F0, Regime::F1}) {
    double prev = -1;
    double max_jump = 0;
    for (double y = -8; y <= 8; y += 0.01) {
      double c = p.increment_cdf(r, y);
      CHECK(c >= prev);
      if (prev >= 0) max_jump = std::max(max_jump, c - prev);
      prev = c;
    }
    CHECK(p.increment_cdf(r, -50.0) < 1e-12);
    CHECK(p.increment_cdf(r, 50.0) > 1.0 - 1e-12);
    // no atoms: increments of the CDF on a fine grid stay small
    CHECK(max_jump < 0.01);
  }
}

TEST_CASE("KL sign: mean log-LR positive under F1, negative under F0") {
  for (auto p : {std_pair(), coin_pair()}) {
    for (Regime r : {Regime::F0, Regime::F1}) {
      RngStream rng(2024, r == Regime::F0 ? 0 : 1);
      const int n = 100000;
      double sum = 0, ss = 0;
      for (int i = 0; i < n; ++i) {
        double v = p.log_lr(p.sample(r, rng));
        sum += v;
        ss += v * v;
      }
      double mean = sum / n;
      double se = std::sqrt((ss / n - mean * mean) / n);
      if (r == Regime::F1)
        CHECK(mean > 3 * se);
      else
        CHECK(mean < -3 * se);
    }
  }
}
