#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dualmarg {

// sm64ctr-v1: counter-based generator. Draw i of stream s is
// mix64(s + (i+1) * 0x9E3779B97F4A7C15) with the splitmix64 finalizer, so
// streams are reproducible from (seed, counter) alone and portable across
// implementations. Distributions are fixed here as well: std:: distributions
// are not specified bit-exactly.
class CounterRng {
 public:
  static constexpr const char* kName = "sm64ctr-v1";

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe under log().
  double next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) via 128-bit multiply-shift.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Box-Muller, two draws per call (no caching, keeps the stream position
  // a pure function of the call sequence).
  double normal(double sigma) {
    const double u1 = next_double_open();
    const double u2 = next_double();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double half_normal(double sigma) { return std::abs(normal(sigma)); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace dualmarg
