// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace epiwarp {

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// Splittable counter-based generator. A generator is a (key, counter) pair;
// each draw hashes the pair through splitmix64, so the value at a given
// (seed, stream path, draw index) never depends on run order or thread
// count. Streams derive independent child keys, which is how per-pixel and
// per-step noise stays stable under parallelism.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(detail::splitmix64(seed ^ 0x5851f42d4c957f2dULL)) {}

  // Child generator for a named or indexed substream.
  Rng stream(std::uint64_t id) const {
    Rng child = *this;
    child.key_ = detail::splitmix64(key_ ^ detail::splitmix64(id + 0x9e3779b97f4a7c15ULL));
    child.counter_ = 0;
    return child;
  }
  Rng stream(std::string_view name) const { return stream(detail::fnv1a(name)); }

  std::uint64_t next_u64() { return detail::splitmix64(key_ + 0xd1342543de82ef95ULL * ++counter_); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n == 0 is invalid.
  std::uint64_t uniform_int(std::uint64_t n) {
    // Rejection-free multiply-shift is biased for large n; the bias at
    // n <= 2^32 is below 2^-32 which is irrelevant for our sample sizes.
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  // Standard normal via Box-Muller; consumes exactly two raw draws.
  double normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;        // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace epiwarp
