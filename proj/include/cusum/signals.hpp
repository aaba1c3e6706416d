#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "cusum/charts.hpp"
#include "cusum/errors.hpp"
#include "cusum/schedule.hpp"

namespace cusum {

enum class SignalValue { InControl, OutOfControl, NoSignal };

inline char to_char(SignalValue v) {
  switch (v) {
    case SignalValue::InControl: return '0';
    case SignalValue::OutOfControl: return '1';
    default: return '-';
  }
}

enum class Scenario { Gap, SingleThreshold, Overlay };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Gap: return "gap";
    case Scenario::SingleThreshold: return "single-threshold";
    default: return "overlay";
  }
}

// Signal thresholds plus the derived scenario class. h = kU + kL is the
// single-threshold case; below it a dead zone (gap) appears, above it
// simultaneous signals become possible (overlay).
struct SignalPolicy {
  double kL;
  double kU;
  double h;
  Scenario scenario;
};

inline SignalPolicy classify(double kL, double kU, double h) {
  if (!(kL > 0) || !(kU > 0) || !(h > 0))
    throw ConfigError("signal policy: kL, kU, h must all be > 0");
  if (h < std::max(kU, kL))
    throw ConfigError("signal policy: requires h >= max(kU, kL)");
  Scenario sc;
  if (std::abs(h - (kU + kL)) <= 1e-12)
    sc = Scenario::SingleThreshold;
  else if (h < kU + kL)
    sc = Scenario::Gap;
  else
    sc = Scenario::Overlay;
  return {kL, kU, h, sc};
}

// The three-valued signal: 1 when rL >= kL, 0 when rU <= h - kU, no signal
// otherwise. A simultaneous signal (possible only when h > kU + kL) is
// treated as no signal due to ambiguity.
inline SignalValue signal_of_state(const DualChartState& state,
                                   const SignalPolicy& policy) {
  if (state.h != policy.h)
    throw std::invalid_argument("signal_of_state: state/policy h mismatch");
  bool out = state.rL >= policy.kL;
  bool in = state.rU <= policy.h - policy.kU;
  if (out && in) return SignalValue::NoSignal;
  if (out) return SignalValue::OutOfControl;
  if (in) return SignalValue::InControl;
  return SignalValue::NoSignal;
}

enum class ScoreLabel { Correct, False, None };

// Per-step scoring against the true regime; signals[i] is the signal at
// time i + 1.
inline std::vector<ScoreLabel> score_signals(std::span<const SignalValue> signals,
                                             const RegimeSchedule& schedule) {
  if (static_cast<std::int64_t>(signals.size()) != schedule.horizon())
    throw std::invalid_argument("score_signals: length mismatch");
  std::vector<ScoreLabel> out(signals.size());
  for (std::size_t i = 0; i < signals.size(); ++i) {
    SignalValue z = signals[i];
    if (z == SignalValue::NoSignal) {
      out[i] = ScoreLabel::None;
      continue;
    }
    Regime truth = schedule.at(static_cast<std::int64_t>(i) + 1);
    bool says_out = z == SignalValue::OutOfControl;
    bool is_out = truth == Regime::F1;
    out[i] = says_out == is_out ? ScoreLabel::Correct : ScoreLabel::False;
  }
  return out;
}

}  // namespace cusum
