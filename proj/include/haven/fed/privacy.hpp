#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "haven/common/rng.hpp"

namespace haven::fed {

struct PrivacyConfig {
  double epsilon = 1.0;
  double delta_fail = 1e-5;
  /// Global sensitivity. Must be > 0 when noise is drawn.
  double sensitivity = 1.0;
  /// Test-only switch: add_laplace returns its input unchanged.
  bool zero_noise = false;

  double scale() const { return sensitivity / epsilon; }
  void validate() const;

  /// Sensitivity derived as 1/|V| for a region of `vehicles`.
  static PrivacyConfig for_region(std::size_t vehicles, double epsilon = 1.0, double delta_fail = 1e-5);
};

/// One Laplace(0, b) draw by inverse CDF.
double sample_laplace(double b, Rng& rng);
double laplace_cdf(double x, double b);

std::vector<double> add_laplace(std::span<const double> v, double sensitivity, double epsilon, Rng& rng,
                                bool zero_noise = false);

/// Noise regional threat-pattern statistics with sensitivity 1/|V|.
std::vector<double> privatize_signature(std::span<const double> stats, std::size_t regional_vehicles,
                                        const PrivacyConfig& cfg, Rng& rng);

struct PrivacyBudget {
  double basic = 0.0;
  double advanced = 0.0;
};

double advanced_composition(std::uint64_t rounds, double epsilon, double delta_fail);

class PrivacyAccountant {
 public:
  PrivacyAccountant(double per_round_epsilon = 1.0, double delta_fail = 1e-5);

  /// Record `rounds` more mechanism invocations; returns the cumulative budget.
  PrivacyBudget charge(std::uint64_t rounds = 1);
  PrivacyBudget spent() const;

  std::uint64_t rounds_used() const { return rounds_; }
  double per_round_epsilon() const { return epsilon_; }
  double delta_fail() const { return delta_; }

 private:
  double epsilon_;
  double delta_;
  std::uint64_t rounds_ = 0;
};

PrivacyBudget accountant_charge(PrivacyAccountant& acc, std::uint64_t rounds);

}  // namespace haven::fed
