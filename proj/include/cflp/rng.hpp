#pragma once

#include <cmath>
#include <cstdint>

namespace cflp {

// Deterministic 64-bit generator (splitmix64). The state advances by the
// golden-ratio increment and each output is a finalizer of the new state:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Every port of the instance generator must reproduce this stream exactly;
// instance files generated from the same (m, n, seed) are byte-identical
// across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1): top 53 bits scaled by 2^-53.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in the open interval (a, b), realized as half-open
  // [a + ulp, b): a draw that lands exactly on an endpoint is nudged one
  // representable value inward.
  double next_open(double a, double b) {
    double x = a + (b - a) * next_unit();
    if (x <= a) x = std::nextafter(a, b);
    if (x >= b) x = std::nextafter(b, a);
    return x;
  }

 private:
  std::uint64_t state_;
};

}  // namespace cflp
