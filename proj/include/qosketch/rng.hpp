#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qosketch {

// Counter-based generator: every value is a pure function of (seed, counters),
// so sampling is reproducible regardless of iteration order or thread count.
namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash(std::uint64_t seed, std::uint64_t a) {
  return mix64(mix64(seed) ^ a);
}

inline std::uint64_t hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(hash(seed, a) ^ mix64(b + 0xD1B54A32D192ED03ull));
}

inline std::uint64_t hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  return mix64(hash(seed, a, b) ^ mix64(c + 0x8CB92BA72F3D8DD7ull));
}

// Uniform in [0,1) with 53 random bits.
inline double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline bool to_sign_bit(std::uint64_t h) { return (h >> 63) != 0; }

// Box-Muller from two counters; avoids log(0) by offsetting the mantissa.
inline double to_gaussian(std::uint64_t h1, std::uint64_t h2) {
  double u1 = (static_cast<double>(h1 >> 11) + 0.5) * 0x1.0p-53;
  double u2 = to_unit(h2);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Minimal sequential stream on top of the counter hash, for places that
// want "draw next value" semantics (shuffles, rejection sampling).
class Stream {
 public:
  explicit Stream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : state_(hash(seed, stream_id)) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  double next_unit() { return to_unit(next()); }

  // Uniform integer in [0, n), n > 0. Rejection keeps it unbiased.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  double next_gaussian() { return to_gaussian(next(), next()); }

 private:
  std::uint64_t state_;
};

// In-place Fisher-Yates; ordering does not depend on the standard library's
// std::shuffle implementation.
template <typename T, typename Vec = std::vector<T>>
void shuffle(Vec& v, Stream& s) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(s.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace rng
}  // namespace qosketch
