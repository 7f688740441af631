#include "haven/fed/privacy.hpp"

#include <cmath>
#include <stdexcept>

namespace haven::fed {

void PrivacyConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("privacy: epsilon must be > 0");
  if (!(delta_fail > 0.0 && delta_fail < 1.0)) throw std::invalid_argument("privacy: delta must lie in (0, 1)");
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) throw std::invalid_argument("privacy: sensitivity must be > 0");
}

PrivacyConfig PrivacyConfig::for_region(std::size_t vehicles, double epsilon, double delta_fail) {
  if (vehicles == 0) throw std::invalid_argument("privacy: regional vehicle count is zero");
  PrivacyConfig c;
  c.epsilon = epsilon;
  c.delta_fail = delta_fail;
  c.sensitivity = 1.0 / static_cast<double>(vehicles);
  return c;
}

double sample_laplace(double b, Rng& rng) {
  if (!(b > 0.0)) throw std::invalid_argument("laplace: scale must be > 0");
  const double u = rng.open_uniform() - 0.5;  // (-0.5, 0.5)
  return -b * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
}

double laplace_cdf(double x, double b) {
  return x < 0.0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
}

std::vector<double> add_laplace(std::span<const double> v, double sensitivity, double epsilon, Rng& rng,
                                bool zero_noise) {
  if (!(sensitivity > 0.0)) throw std::invalid_argument("add_laplace: sensitivity must be > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("add_laplace: epsilon must be > 0");
  std::vector<double> out(v.begin(), v.end());
  if (zero_noise) return out;
  const double b = sensitivity / epsilon;
  for (auto& x : out) x += sample_laplace(b, rng);
  return out;
}

std::vector<double> privatize_signature(std::span<const double> stats, std::size_t regional_vehicles,
                                        const PrivacyConfig& cfg, Rng& rng) {
  const auto derived = PrivacyConfig::for_region(regional_vehicles, cfg.epsilon, cfg.delta_fail);
  return add_laplace(stats, derived.sensitivity, derived.epsilon, rng, cfg.zero_noise);
}

double advanced_composition(std::uint64_t rounds, double epsilon, double delta_fail) {
  const double t = static_cast<double>(rounds);
  return epsilon * std::sqrt(2.0 * t * std::log(1.0 / delta_fail)) + t * epsilon * std::expm1(epsilon);
}

PrivacyAccountant::PrivacyAccountant(double per_round_epsilon, double delta_fail)
    : epsilon_(per_round_epsilon), delta_(delta_fail) {
  if (!(epsilon_ > 0.0)) throw std::invalid_argument("accountant: epsilon must be > 0");
  if (!(delta_ > 0.0 && delta_ < 1.0)) throw std::invalid_argument("accountant: delta must lie in (0, 1)");
}

PrivacyBudget PrivacyAccountant::charge(std::uint64_t rounds) {
  rounds_ += rounds;
  return spent();
}

PrivacyBudget PrivacyAccountant::spent() const {
  return {static_cast<double>(rounds_) * epsilon_, advanced_composition(rounds_, epsilon_, delta_)};
}

PrivacyBudget accountant_charge(PrivacyAccountant& acc, std::uint64_t rounds) { return acc.charge(rounds); }

}  // namespace haven::fed
