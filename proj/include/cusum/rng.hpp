#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cusum {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Seeded stream of randomness. Stream i of a run is a pure function of
// (master_seed, i), so replications can be evaluated in any order or in
// parallel and still produce identical draws.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t s = master_seed;
    std::uint64_t a = detail::splitmix64(s);
    s ^= stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
    std::uint64_t b = detail::splitmix64(s);
    gen_.seed(a ^ (b << 1));
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_pos() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  // One standard normal draw via Box-Muller. Stateless per call: two
  // uniforms in, one normal out, so the call sequence is unambiguous.
  double normal() {
    double u1 = uniform_pos();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cusum
