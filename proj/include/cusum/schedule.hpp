#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cusum/distributions.hpp"
#include "cusum/errors.hpp"

namespace cusum {

struct RegimePeriod {
  std::int64_t start;  // inclusive, >= 1
  std::int64_t end;    // inclusive
  Regime state;
};

// True regime at each time step; F0 outside the listed periods.
class RegimeSchedule {
 public:
  RegimeSchedule(std::int64_t horizon, std::vector<RegimePeriod> periods = {})
      : horizon_(horizon), periods_(std::move(periods)) {
    if (horizon_ < 0) throw ConfigError("schedule: horizon must be >= 0");
    std::sort(periods_.begin(), periods_.end(),
              [](const auto& a, const auto& b) { return a.start < b.start; });
    std::int64_t prev_end = 0;
    for (const auto& p : periods_) {
      if (p.start < 1 || p.end < p.start || p.end > horizon_)
        throw ConfigError("schedule: period outside [1, horizon]");
      if (p.start <= prev_end) throw ConfigError("schedule: periods overlap");
      prev_end = p.end;
    }
  }

  // Pure post-change schedule: F_pre for t < n, F_post from n on.
  static RegimeSchedule change_point(std::int64_t horizon, std::int64_t n,
                                     Regime pre, Regime post);

  std::int64_t horizon() const { return horizon_; }
  const std::vector<RegimePeriod>& periods() const { return periods_; }

  Regime at(std::int64_t t) const {
    for (const auto& p : periods_) {
      if (t >= p.start && t <= p.end) return p.state;
    }
    return Regime::F0;
  }

 private:
  std::int64_t horizon_;
  std::vector<RegimePeriod> periods_;
};

inline RegimeSchedule RegimeSchedule::change_point(std::int64_t horizon,
                                                   std::int64_t n, Regime pre,
                                                   Regime post) {
  std::vector<RegimePeriod> ps;
  if (n > 1 && pre == Regime::F1) ps.push_back({1, n - 1, Regime::F1});
  if (n <= horizon && post == Regime::F1)
    ps.push_back({n, horizon, Regime::F1});
  return RegimeSchedule(horizon, std::move(ps));
}

}  // namespace cusum
