#include "haven/common/rng.hpp"

#include <cmath>
#include <numbers>

namespace haven {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix64(seed);
  for (auto t : tags) h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

double hash_uniform(std::uint64_t key) noexcept {
  return static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

double hash_normal(std::uint64_t key) noexcept {
  const double u1 = (static_cast<double>(mix64(key ^ 0x5bd1e995ULL) >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = hash_uniform(key ^ 0x1b873593ULL);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::open_uniform() {
  double u = 0.0;
  do {
    u = uniform();
  } while (u <= 0.0);
  return u;
}

}  // namespace haven
