#include "cusum/calibration.hpp"

#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "cusum/charts.hpp"
#include "cusum/errors.hpp"

namespace cusum {

namespace {

// Solve A x = b in place by Gaussian elimination with partial pivoting.
// A is m x m row-major. Throws on a (numerically) singular system.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                int m) {
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::abs(a[r * m + col]) > std::abs(a[piv * m + col])) piv = r;
    }
    if (std::abs(a[piv * m + col]) < 1e-300)
      throw NumericError("arl_markov: singular transition system");
    if (piv != col) {
      for (int c = col; c < m; ++c) std::swap(a[piv * m + c], a[col * m + c]);
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < m; ++r) {
      double f = a[r * m + col] / a[col * m + col];
      if (f == 0.0) continue;
      for (int c = col; c < m; ++c) a[r * m + c] -= f * a[col * m + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(m);
  for (int r = m - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < m; ++c) s -= a[r * m + c] * x[c];
    x[r] = s / a[r * m + r];
  }
  return x;
}

}  // namespace

double arl_markov(const ArlQuery& query) {
  if (query.states < 2) throw ConfigError("arl_markov: need at least 2 states");
  if (query.states > 1000) throw ConfigError("arl_markov: states capped at 1000");
  if (!(query.k > 0)) throw ConfigError("arl_markov: k must be > 0");

  const int m = query.states;
  const double w = query.k / m;
  auto cdf = [&](double y) {
    return query.side == ChartSide::Lower
               ? query.pair.increment_cdf(query.regime, y)
               : query.pair.neg_increment_cdf(query.regime, y);
  };

  // A = I - Q over the transient cells [0, k).
  std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    double v = (i + 0.5) * w;  // cell midpoint
    double prev = cdf(w - v);  // cell 0 absorbs the reflection mass below 0
    a[i * static_cast<std::size_t>(m) + 0] = -prev;
    for (int j = 1; j < m; ++j) {
      double cur = cdf((j + 1) * w - v);
      a[i * static_cast<std::size_t>(m) + j] = -(cur - prev);
      prev = cur;
    }
    a[i * static_cast<std::size_t>(m) + i] += 1.0;
  }
  std::vector<double> ones(m, 1.0);
  std::vector<double> n = solve_dense(std::move(a), std::move(ones), m);
  return n[0];  // both charts start at 0 (magnitude scale)
}

ArlMcResult arl_mc(const ArlQuery& query) {
  if (query.reps < 1) throw ConfigError("arl_mc: reps must be >= 1");
  ChartKind kind = query.side == ChartSide::Lower ? ChartKind::ClassicL
                                                  : ChartKind::ClassicU;
  std::vector<std::int64_t> times(static_cast<std::size_t>(query.reps));
  std::vector<char> censored(static_cast<std::size_t>(query.reps), 0);

  auto worker = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      RngStream rng(query.master_seed, static_cast<std::uint64_t>(r));
      HittingResult hit = first_hitting(kind, query.pair, query.regime,
                                        query.k, 0.0, rng, query.t_max);
      times[static_cast<std::size_t>(r)] = hit.time;
      censored[static_cast<std::size_t>(r)] = hit.censored ? 1 : 0;
    }
  };

  int nthreads = std::max(1, query.threads);
  if (nthreads == 1 || query.reps < 2 * nthreads) {
    worker(0, query.reps);
  } else {
    std::vector<std::thread> pool;
    std::int64_t chunk = (query.reps + nthreads - 1) / nthreads;
    for (int i = 0; i < nthreads; ++i) {
      std::int64_t lo = i * chunk;
      std::int64_t hi = std::min(query.reps, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Fixed-order reduction after collection keeps the result independent of
  // the degree of parallelism.
  std::int64_t ncens = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < times.size(); ++r) {
    ncens += censored[r];
    sum += static_cast<double>(times[r]);
  }
  if (ncens > 0 && query.strict_censoring) {
    throw NumericError("arl_mc: " + std::to_string(ncens) +
                       " of " + std::to_string(query.reps) +
                       " paths censored at t_max=" + std::to_string(query.t_max));
  }
  double mean = sum / static_cast<double>(query.reps);
  double se = std::numeric_limits<double>::quiet_NaN();
  if (query.reps > 1) {
    double ss = 0.0;
    for (std::int64_t t : times) {
      double d = static_cast<double>(t) - mean;
      ss += d * d;
    }
    se = std::sqrt(ss / (static_cast<double>(query.reps) - 1.0) /
                   static_cast<double>(query.reps));
  }
  return {mean, se, ncens};
}

double calibrate_threshold(const ArlQuery& query, double target_arl) {
  if (!(target_arl > 1.0))
    throw ConfigError("calibrate_threshold: target ARL must be > 1");

  auto arl_at = [&](double k) {
    ArlQuery q = query;
    q.k = k;
    return q.method == ArlMethod::Markov ? arl_markov(q) : arl_mc(q).mean;
  };

  // Expand the bracket upward until the target is met.
  double k_hi = 1.0;
  double a_hi = arl_at(k_hi);
  while (a_hi < target_arl) {
    k_hi *= 2.0;
    if (k_hi > 100.0)
      throw NumericError("calibrate_threshold: target ARL unreachable by k <= 100");
    a_hi = arl_at(k_hi);
  }
  double k_lo = 1e-6;

  // ARL is monotone in k; bisect to the smallest k meeting the target.
  while (k_hi - k_lo > 1e-3) {
    double mid = 0.5 * (k_lo + k_hi);
    double a_mid = arl_at(mid);
    if (a_mid >= target_arl) {
      k_hi = mid;
      a_hi = a_mid;
      if (a_hi <= target_arl * 1.01) break;  // within 1% relative, from above
    } else {
      k_lo = mid;
    }
  }
  return k_hi;
}

}  // namespace cusum
