#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace orderdual {

/// SplitMix64 (Steele, Lea, Flood). The full update is
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
/// and is reproduced verbatim so sampled logs are identical across platforms and
/// implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits: (next() >> 11) * 2^-53.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Poisson(mean) by sequential inversion, in chunks of mean <= 16 to keep
  /// e^{-mean} well away from underflow.
  std::uint64_t poisson(double mean) {
    if (!(mean >= 0) || !std::isfinite(mean)) throw std::invalid_argument("SplitMix64::poisson: bad mean");
    std::uint64_t total = 0;
    while (mean > 0) {
      const double chunk = mean > 16.0 ? 16.0 : mean;
      mean -= chunk;
      double p = std::exp(-chunk);
      double cdf = p;
      const double u = uniform();
      std::uint64_t k = 0;
      while (u >= cdf && k < 1000) {
        ++k;
        p *= chunk / static_cast<double>(k);
        cdf += p;
      }
      total += k;
    }
    return total;
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace orderdual
