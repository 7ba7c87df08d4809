#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace curlsob {

/// Counter-based generator: the i-th draw of a stream depends only on (seed, i),
/// so samples can be produced in any order or in parallel with identical results.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const { return mix(mix(seed_) ^ mix(counter + 0x632be59bd9b4e019ULL)); }

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const {
    return (double(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on draws 2c and 2c+1; `second` selects the sine branch.
  double normal(std::uint64_t counter, bool second = false) const {
    const double u1 = uniform(2 * counter), u2 = uniform(2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return second ? r * std::sin(a) : r * std::cos(a);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace curlsob
