#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace haven {

/// splitmix64 finalizer; used to derive independent sub-seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds a list of tags into a seed so that every subsystem gets its own
/// reproducible stream, e.g. derive_seed(seed, {kTagSensors, vehicle}).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept;

/// Stateless uniform in [0,1) keyed on a hash; used where a value must be a
/// pure function of its coordinates rather than of draw order.
double hash_uniform(std::uint64_t key) noexcept;
/// Stateless standard normal (Box-Muller over two hashed uniforms).
double hash_normal(std::uint64_t key) noexcept;

/// Seeded generator with the handful of draws the simulator needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  /// Strictly inside (0,1); safe for log().
  double open_uniform();
  double normal(double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }
  /// Inclusive range.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace haven
