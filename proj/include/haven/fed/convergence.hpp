#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "haven/fed/aggregator.hpp"
#include "haven/fed/byzantine.hpp"

namespace haven::fed {

struct ConvergenceOptions {
  std::size_t dim = 10;
  double trim_ratio = 0.3;
  AggregationRule rule = AggregationRule::TrimmedMean;
  /// Per-coordinate std of the noise added to each honest gradient (sigma).
  double gradient_noise = 0.0;
  /// Std of client optima around the global optimum; 0 gives identical optima.
  double center_spread = 0.0;
  /// Distance of the starting point from w*.
  double init_distance = 10.0;
};

/// Federated gradient descent on diagonal quadratics whose curvatures span
/// [mu, lipschitz], with step 1/lipschitz. The first round(byz_fraction * n)
/// clients act per `behavior` (LabelFlip is treated as SignFlip here: the
/// quadratic clients have no labels). Returns F(w^(t)) - F* for t = 0..rounds,
/// where F is the mean of the honest objectives.
/// Throws std::invalid_argument when byz_fraction exceeds trim_ratio or
/// mu > lipschitz.
std::vector<double> convergence_oracle(std::size_t n_clients, double byz_fraction, const ByzantineBehavior& behavior,
                                       double mu, double lipschitz, std::size_t rounds, std::uint64_t seed,
                                       const ConvergenceOptions& options = {});

/// Least-squares slope of log(values[t]) over t in [first, last).
double log_slope(const std::vector<double>& values, std::size_t first, std::size_t last);

}  // namespace haven::fed
