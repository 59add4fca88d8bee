#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace clsgen {

// splitmix64 step; used for seed derivation and the corpus split hash.
uint64_t splitmix64(uint64_t& state);

// One-shot mix of a 64-bit value.
uint64_t mix64(uint64_t x);

// FNV-1a 64-bit hash of a byte string.
uint64_t fnv1a64(std::string_view bytes);

// Deterministic RNG. mt19937_64 is fully specified by the standard; the
// uniform/normal transforms below avoid the implementation-defined
// std::*_distribution adapters so streams reproduce across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  // Independent child stream (workers, sub-tasks).
  Rng child(uint64_t stream_id) const { return Rng(mix64(seed_ ^ mix64(stream_id + 0x9e3779b97f4a7c15ULL))); }

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller (no cached spare; deterministic stream).
  double normal();

  // Uniform integer in [0, n); n > 0.
  uint64_t below(uint64_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace clsgen
