#pragma once

#include <cstdint>
#include <string_view>

namespace msalab {

// Counter-based random numbers. Every drawn value is a pure function of a
// 64-bit key assembled by hashing (seed, tags...), so samples attached to
// disjoint index sets are independent and identical regardless of evaluation
// order or worker count.

namespace rng {

// SplitMix64 finalizer. Good avalanche, cheap, stable across platforms.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline std::uint64_t hash_tag(std::string_view tag) {
  // FNV-1a
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t derive(std::uint64_t seed, std::string_view tag) {
  return combine(seed, hash_tag(tag));
}

inline std::uint64_t derive(std::uint64_t seed, std::string_view tag, std::uint64_t a) {
  return combine(derive(seed, tag), a);
}

inline std::uint64_t derive(std::uint64_t seed, std::string_view tag, std::uint64_t a,
                            std::uint64_t b) {
  return combine(derive(seed, tag, a), b);
}

// Uniform double in [0, 1) from the top 53 bits of a key-indexed draw.
inline double uniform01(std::uint64_t key) {
  return static_cast<double>(mix(key) >> 11) * 0x1.0p-53;
}

// Small stateful stream for test generators and calibration sampling.
// Deterministic given the key; not used for disorder fields.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : state_(mix(key)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  double next_uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform01(); }

  // Integer in [0, n), n > 0.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace rng
}  // namespace msalab
