#pragma once

#include <cmath>
#include <cstdint>

namespace gsopt {

// splitmix64 finalizer. Good avalanche, two multiplies; plenty for seeding
// and for the counter-keyed streams below (not cryptographic).
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives the state for an independent stream from (seed, tag, a, b).
// Every consumer of randomness gets its own key, e.g. (seed, kGumbel,
// replica, step), so draws never depend on thread scheduling or on how
// work is chunked across workers.
inline uint64_t rng_key(uint64_t seed, uint64_t tag, uint64_t a = 0, uint64_t b = 0) {
  uint64_t k = mix64(seed + 0x9e3779b97f4a7c15ull);
  k = mix64(k ^ (tag + 0x9e3779b97f4a7c15ull));
  k = mix64(k ^ (a + 0xbf58476d1ce4e5b9ull));
  k = mix64(k ^ (b + 0x94d049bb133111ebull));
  return k;
}

// Stream tags. Values are part of the determinism contract: changing them
// changes every seeded result, so append only.
namespace streams {
inline constexpr uint64_t kThetaInit = 1;
inline constexpr uint64_t kGumbel = 2;
inline constexpr uint64_t kSubstitution = 3;
inline constexpr uint64_t kGaPhase = 4;
inline constexpr uint64_t kSkCouplings = 5;
inline constexpr uint64_t kGnp = 6;
inline constexpr uint64_t kInstanceRun = 7;
inline constexpr uint64_t kInstanceDraw = 8;
inline constexpr uint64_t kSa = 9;
inline constexpr uint64_t kLabelGa = 10;
inline constexpr uint64_t kGreedy = 11;
inline constexpr uint64_t kTestFn = 12;
}  // namespace streams

class Rng {
 public:
  explicit Rng(uint64_t key) : state_(key) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1): 53-bit mantissa centered in its
  // bucket, so 0 and 1 are unreachable and log(u), log(1-u) are safe.
  double uniform01() { return (double)((next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n), n >= 1.
  uint64_t below(uint64_t n) {
    uint64_t lim = ~0ull - ~0ull % n;
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= lim);
    return x % n;
  }

  // Box-Muller; caches the second draw of each pair.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Standard Gumbel(0,1) via inverse CDF.
  double gumbel() { return -std::log(-std::log(uniform01())); }

  // Standard Logistic(0,1); equals the difference of two independent
  // Gumbel(0,1) draws, which is what the K=2 sampling fast path needs.
  double logistic() {
    double u = uniform01();
    return std::log(u / (1.0 - u));
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gsopt
