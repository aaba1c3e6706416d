#pragma once

#include <cstdint>
#include <stdexcept>

#include "cusum/distributions.hpp"
#include "cusum/errors.hpp"

namespace cusum {

// One reflected-walk update: add the increment, reflect at 0, cap at h.
// Clamps assign the exact boundary constant so that coupling of two charts
// can be detected by exact equality.
inline double bounded_step(double x_state, double log_lr_value, double h) {
  if (!(h > 0)) throw std::invalid_argument("bounded_step: h must be > 0");
  if (!(x_state >= 0.0 && x_state <= h))
    throw std::invalid_argument("bounded_step: state outside [0, h]");
  double y = x_state + log_lr_value;
  if (y <= 0.0) return 0.0;
  if (y >= h) return h;
  return y;
}

// The pair of bounded non-restarting charts: rL started at 0, rU at h.
// Invariant 0 <= rL <= rU <= h holds at every step.
struct DualChartState {
  double rL;
  double rU;
  double h;
  std::int64_t t;

  static DualChartState initial(double h) {
    if (!(h > 0)) throw std::invalid_argument("DualChartState: h must be > 0");
    return {0.0, h, h, 0};
  }

  bool coupled() const { return rL == rU; }
};

inline DualChartState dual_step(const DualChartState& s, double log_lr_value) {
  return {bounded_step(s.rL, log_lr_value, s.h),
          bounded_step(s.rU, log_lr_value, s.h), s.h, s.t + 1};
}

// Classic unbounded charts. sU is stored as a nonnegative magnitude (the
// chart driven by the negated increments), so both charts signal at >= k.
struct ClassicChartState {
  double sL = 0.0;
  double sU = 0.0;
  std::int64_t t = 0;
};

inline ClassicChartState classic_step(const ClassicChartState& s,
                                      double log_lr_value) {
  double l = s.sL + log_lr_value;
  double u = s.sU - log_lr_value;
  return {l > 0.0 ? l : 0.0, u > 0.0 ? u : 0.0, s.t + 1};
}

enum class ChartKind { BoundedL, BoundedU, ClassicL, ClassicU };

struct HittingResult {
  std::int64_t time;  // first crossing, or t_max when censored
  bool censored;
};

// First time t >= 1 at which the chart crosses its threshold:
//   BoundedL: rL >= k from rL = 0;   BoundedU: rU <= h - k from rU = h;
//   ClassicL: sL >= k;               ClassicU: sU >= k (magnitude).
// The bounded charts are evolved through the same reflected magnitude as
// the classic ones, with the cap applied; the cap cannot bind before the
// crossing when h >= k, so bounded and classic hits agree exactly per seed.
inline HittingResult first_hitting(ChartKind kind, const DistributionPair& pair,
                                   Regime regime, double k, double h,
                                   RngStream& rng, std::int64_t t_max) {
  if (!(k > 0)) throw ConfigError("first_hitting: k must be > 0");
  if (t_max < 1) throw ConfigError("first_hitting: t_max must be >= 1");
  bool bounded = kind == ChartKind::BoundedL || kind == ChartKind::BoundedU;
  bool upper = kind == ChartKind::BoundedU || kind == ChartKind::ClassicU;
  if (bounded && h < k)
    throw ConfigError("first_hitting: bounded chart needs h >= k");

  double state = 0.0;
  for (std::int64_t t = 1; t <= t_max; ++t) {
    double inc = pair.log_lr(pair.sample(regime, rng));
    if (upper) inc = -inc;
    double y = state + inc;
    state = y > 0.0 ? y : 0.0;
    if (bounded && state > h) state = h;
    if (state >= k) return {t, false};
  }
  return {t_max, true};
}

}  // namespace cusum
