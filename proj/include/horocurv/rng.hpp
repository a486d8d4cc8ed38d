// rng.hpp - counter-based random number generator. (seed, stream) picks an
// independent sequence; outputs are a pure function of (seed, stream, counter),
// so concurrent samplers stay deterministic no matter how work is scheduled.
#pragma once

#include <cmath>
#include <cstdint>

namespace horocurv {

namespace detail {
// SplitMix64 finalizer; full-period bijective mixer on 64 bits.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(detail::mix64(detail::mix64(seed) ^
                           detail::mix64(stream ^ 0xE7037ED1A0B428DBULL))) {}

  std::uint64_t next_u64() {
    return detail::mix64(key_ ^ (0x9E3779B97F4A7C15ULL * ++counter_));
  }

  // Uniform double in [0, 1), 53 significant bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes uniforms in deterministic pairs.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log stays finite.
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace horocurv
