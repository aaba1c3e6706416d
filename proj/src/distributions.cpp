#include "cusum/distributions.hpp"

#include <cmath>
#include <numbers>

#include "cusum/errors.hpp"

namespace cusum {

double normal_cdf(double y) {
  // erfc keeps full precision in the far tails where 1 - Phi underflows.
  return 0.5 * std::erfc(-y / std::numbers::sqrt2);
}

DistributionPair DistributionPair::gaussian(double mu0, double mu1,
                                            double sigma) {
  if (!(sigma > 0)) throw ConfigError("gaussian model requires sigma > 0");
  if (mu0 == mu1) throw ConfigError("gaussian model requires mu0 != mu1");
  DistributionPair p;
  p.kind_ = Kind::GaussianMeanShift;
  p.mu0_ = mu0;
  p.mu1_ = mu1;
  p.sigma_ = sigma;
  return p;
}

DistributionPair DistributionPair::discrete(std::vector<double> support,
                                            std::vector<double> p0,
                                            std::vector<double> p1) {
  if (support.empty() || support.size() != p0.size() ||
      support.size() != p1.size()) {
    throw ConfigError("discrete model: support/p0/p1 sizes must match");
  }
  double s0 = 0, s1 = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (p0[i] < 0 || p1[i] < 0)
      throw ConfigError("discrete model: negative probability");
    // mutual absolute continuity: mass vanishes on both sides or neither
    if ((p0[i] > 0) != (p1[i] > 0))
      throw ConfigError("discrete model: p0 and p1 must share support");
    s0 += p0[i];
    s1 += p1[i];
  }
  if (std::abs(s0 - 1.0) > 1e-12 || std::abs(s1 - 1.0) > 1e-12)
    throw ConfigError("discrete model: probabilities must sum to 1");

  DistributionPair p;
  p.kind_ = Kind::DiscreteFinite;
  p.support_ = std::move(support);
  p.p0_ = std::move(p0);
  p.p1_ = std::move(p1);
  p.log_lr_.resize(p.support_.size(), 0.0);
  for (std::size_t i = 0; i < p.support_.size(); ++i) {
    if (p.p0_[i] > 0) p.log_lr_[i] = std::log(p.p1_[i] / p.p0_[i]);
  }
  return p;
}

double DistributionPair::log_lr(double x) const {
  if (kind_ == Kind::GaussianMeanShift) {
    return ((mu1_ - mu0_) * x + (mu0_ * mu0_ - mu1_ * mu1_) / 2.0) /
           (sigma_ * sigma_);
  }
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] == x) return log_lr_[i];
  }
  throw std::domain_error("log_lr: x not in discrete support");
}

double DistributionPair::sample(Regime regime, RngStream& rng) const {
  if (kind_ == Kind::GaussianMeanShift) {
    double mu = regime == Regime::F0 ? mu0_ : mu1_;
    return mu + sigma_ * rng.normal();
  }
  const auto& p = probs(regime);
  double u = rng.uniform();
  double acc = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    acc += p[i];
    if (u < acc) return support_[i];
  }
  return support_.back();
}

double DistributionPair::increment_cdf(Regime regime, double y) const {
  if (kind_ == Kind::GaussianMeanShift) {
    // log lr(X) = d*(X - (mu0+mu1)/2)/sigma^2 with d = mu1 - mu0, so it is
    // gaussian under either regime.
    double d = mu1_ - mu0_;
    double mu = regime == Regime::F0 ? mu0_ : mu1_;
    double mean = d * (mu - (mu0_ + mu1_) / 2.0) / (sigma_ * sigma_);
    double sd = std::abs(d) / sigma_;
    return normal_cdf((y - mean) / sd);
  }
  const auto& p = probs(regime);
  double acc = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (log_lr_[i] <= y) acc += p[i];
  }
  return acc;
}

double DistributionPair::neg_increment_cdf(Regime regime, double y) const {
  if (kind_ == Kind::GaussianMeanShift) {
    // -log lr(X) is gaussian too; atomless, so the complement is exact.
    return 1.0 - increment_cdf(regime, -y);
  }
  const auto& p = probs(regime);
  double acc = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (-log_lr_[i] <= y) acc += p[i];
  }
  return acc;
}

}  // namespace cusum
