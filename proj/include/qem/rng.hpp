/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_RNG_HPP
#define QEM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace qem {

/// Counter-based pseudorandom generator built on the SplitMix64 mixing
/// function (Steele, Lea & Flood 2014). The n-th output for seed s is
/// mix(s + n * 0x9E3779B97F4A7C15), so a (seed, counter) pair fully
/// determines every draw and seeds are portable across platforms.
///
/// Trial-level streams are derived as seed XOR trial_index; the mixer keeps
/// nearby seeds uncorrelated.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 significant bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; pairs are cached so draw counts stay
  /// reproducible.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  /// Stream for an independent trial: seed XOR trial index.
  CounterRng derive(std::uint64_t stream_index) const {
    return CounterRng(seed_ ^ stream_index);
  }

private:
  std::uint64_t seed_;
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

} // namespace qem

#endif
