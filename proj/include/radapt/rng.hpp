#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace radapt {

// Splittable seeded generator. Child seeds are derived by hashing the parent
// seed together with integer or string tags, so independent streams can be
// handed out per domain, per replicate, per trial without coordination.
// All randomness in the library flows through this type; a fixed master seed
// reproduces every result bit for bit.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // Derived seed for a tagged child stream. Order of tags matters.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
    return mix(mix(seed) ^ (tag + 0x9e3779b97f4a7c15ULL));
  }
  static std::uint64_t derive(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return mix(mix(seed) ^ h);
  }

  SplitRng child(std::uint64_t tag) const { return SplitRng(derive(seed_, tag)); }
  SplitRng child(std::string_view tag) const { return SplitRng(derive(seed_, tag)); }

  std::mt19937_64& engine() { return engine_; }

  double normal(double mean, double stddev) {
    std::normal_distribution<double> d(mean, stddev);
    return d(engine_);
  }

  double uniform01() {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    return d(engine_);
  }

  // Rademacher sign: -1 or +1 with equal probability.
  double sign() { return (engine_() & 1ULL) ? 1.0 : -1.0; }

  std::size_t index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return d(engine_);
  }

 private:
  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace radapt
