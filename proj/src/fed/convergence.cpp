#include "haven/fed/convergence.hpp"

#include <cmath>
#include <stdexcept>

#include "haven/fed/trimmed_mean.hpp"

namespace haven::fed {

std::vector<double> convergence_oracle(std::size_t n_clients, double byz_fraction, const ByzantineBehavior& behavior,
                                       double mu, double lipschitz, std::size_t rounds, std::uint64_t seed,
                                       const ConvergenceOptions& options) {
  if (n_clients < 3) throw std::invalid_argument("convergence_oracle: need at least 3 clients");
  if (!(mu > 0.0) || !(mu <= lipschitz)) throw std::invalid_argument("convergence_oracle: need 0 < mu <= L");
  if (!(byz_fraction >= 0.0) || byz_fraction > options.trim_ratio) {
    throw std::invalid_argument("convergence_oracle: byzantine fraction exceeds trim capacity");
  }
  const std::size_t d = options.dim;
  if (d == 0) throw std::invalid_argument("convergence_oracle: dim must be > 0");
  const auto n_byz = static_cast<std::size_t>(std::llround(byz_fraction * static_cast<double>(n_clients)));

  Rng rng(seed);
  std::vector<double> curvature(d);
  for (std::size_t j = 0; j < d; ++j) {
    curvature[j] = d == 1 ? mu : mu + (lipschitz - mu) * static_cast<double>(j) / static_cast<double>(d - 1);
  }
  std::vector<double> w_star(d);
  for (auto& v : w_star) v = rng.normal();
  std::vector<std::vector<double>> centers(n_clients, w_star);
  for (auto& c : centers) {
    for (auto& v : c) v += options.center_spread * rng.normal();
  }
  // Honest clients define F; its optimum is the mean of their centers.
  std::vector<double> opt(d, 0.0);
  const std::size_t n_honest = n_clients - n_byz;
  for (std::size_t k = n_byz; k < n_clients; ++k) {
    for (std::size_t j = 0; j < d; ++j) opt[j] += centers[k][j] / static_cast<double>(n_honest);
  }
  auto global_loss = [&](const std::vector<double>& w) {
    double f = 0.0;
    for (std::size_t k = n_byz; k < n_clients; ++k) {
      for (std::size_t j = 0; j < d; ++j) f += 0.5 * curvature[j] * (w[j] - centers[k][j]) * (w[j] - centers[k][j]);
    }
    return f / static_cast<double>(n_honest);
  };
  const double f_star = global_loss(opt);

  std::vector<double> w(d);
  {
    std::vector<double> dir(d);
    for (auto& v : dir) v = rng.normal();
    const double n = l2_norm(dir);
    for (std::size_t j = 0; j < d; ++j) w[j] = opt[j] + options.init_distance * dir[j] / n;
  }

  const double eta = 1.0 / lipschitz;
  ByzantineBehavior adv = behavior;
  if (adv.kind == ByzantineKind::LabelFlip) adv.kind = ByzantineKind::SignFlip;

  std::vector<double> trajectory;
  trajectory.reserve(rounds + 1);
  trajectory.push_back(global_loss(w) - f_star);
  std::vector<std::vector<double>> deltas(n_clients, std::vector<double>(d));
  for (std::size_t t = 0; t < rounds; ++t) {
    for (std::size_t k = 0; k < n_clients; ++k) {
      ClientUpdate u;
      u.delta.resize(d);
      for (std::size_t j = 0; j < d; ++j) {
        const double g = curvature[j] * (w[j] - centers[k][j]) + options.gradient_noise * rng.normal();
        u.delta[j] = -eta * g;
      }
      deltas[k] = k < n_byz ? byzantine_update(adv, u, rng).delta : std::move(u.delta);
    }
    const auto step = options.rule == AggregationRule::TrimmedMean ? trimmed_mean(deltas, options.trim_ratio)
                                                                   : coordinate_mean(deltas);
    for (std::size_t j = 0; j < d; ++j) w[j] += step[j];
    trajectory.push_back(global_loss(w) - f_star);
  }
  return trajectory;
}

double log_slope(const std::vector<double>& values, std::size_t first, std::size_t last) {
  if (last > values.size() || last < first + 2) throw std::invalid_argument("log_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(last - first);
  for (std::size_t t = first; t < last; ++t) {
    const double x = static_cast<double>(t), y = std::log(values[t]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace haven::fed
