#pragma once

#include <string>
#include <vector>

#include "cusum/rng.hpp"

namespace cusum {

enum class Regime { F0, F1 };

inline const char* to_string(Regime r) { return r == Regime::F0 ? "F0" : "F1"; }

// Standard normal CDF, absolute error below 1e-12.
double normal_cdf(double y);

// The known in-control (F0) / out-of-control (F1) model. Immutable and
// freely shareable; all randomness comes in through an RngStream owned by
// the caller.
class DistributionPair {
 public:
  enum class Kind { GaussianMeanShift, DiscreteFinite };

  static DistributionPair gaussian(double mu0, double mu1, double sigma);
  static DistributionPair discrete(std::vector<double> support,
                                   std::vector<double> p0,
                                   std::vector<double> p1);

  Kind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == Kind::DiscreteFinite; }

  // log(dF1/dF0)(x). Discrete x outside the support is a domain error.
  double log_lr(double x) const;

  // One independent draw under the requested regime.
  double sample(Regime regime, RngStream& rng) const;

  // P(log lr(X) <= y) under the given regime.
  double increment_cdf(Regime regime, double y) const;

  // P(-log lr(X) <= y): the increment CDF for the upper (magnitude) chart.
  // Distinct from 1 - increment_cdf(-y) when the log-LR has atoms.
  double neg_increment_cdf(Regime regime, double y) const;

  // Gaussian accessors.
  double mu0() const { return mu0_; }
  double mu1() const { return mu1_; }
  double sigma() const { return sigma_; }

  // Discrete accessors.
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& probs(Regime regime) const {
    return regime == Regime::F0 ? p0_ : p1_;
  }

 private:
  DistributionPair() = default;

  Kind kind_ = Kind::GaussianMeanShift;
  double mu0_ = 0, mu1_ = 0, sigma_ = 1;
  std::vector<double> support_, p0_, p1_;
  std::vector<double> log_lr_;  // per support point
};

}  // namespace cusum
