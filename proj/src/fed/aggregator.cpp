#include "haven/fed/aggregator.hpp"

#include <stdexcept>

#include "haven/fed/trimmed_mean.hpp"

namespace haven::fed {

void AggregatorConfig::validate() const {
  if (!(trim_ratio >= 0.0 && trim_ratio < 0.5)) throw std::invalid_argument("aggregator: trim_ratio must lie in [0, 0.5)");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("aggregator: learning_rate must be > 0");
  if (!(round_interval_s > 0.0)) throw std::invalid_argument("aggregator: round_interval_s must be > 0");
}

RoundResult aggregate_round(const GlobalModel& global, std::span<const ClientUpdate> received,
                            const AggregatorConfig& agg, const PrivacyConfig& priv, PrivacyAccountant& accountant,
                            Rng& rng) {
  agg.validate();
  if (received.empty()) throw std::invalid_argument("aggregate_round: no updates received");
  if (!all_finite(global.weights)) throw std::invalid_argument("aggregate_round: global model is not finite");

  RoundResult out;
  out.summary.received = received.size();
  std::vector<std::vector<double>> deltas;
  std::vector<double> weights;
  for (const auto& u : received) {
    if (u.round != global.round || u.delta.size() != global.weights.size() || !all_finite(u.delta)) {
      ++out.summary.rejected;
      continue;
    }
    deltas.push_back(u.delta);
    weights.push_back(static_cast<double>(u.sample_count));
    out.accepted.push_back(u.vehicle_id);
  }
  if (deltas.empty()) throw std::runtime_error("aggregate_round: every update was rejected");
  out.summary.aggregated = deltas.size();

  std::span<const double> w = agg.weighted ? std::span<const double>(weights) : std::span<const double>();
  std::vector<double> mean;
  if (agg.rule == AggregationRule::TrimmedMean && deltas.size() >= 3) {
    auto tm = trimmed_mean_detailed(deltas, agg.trim_ratio, w);
    mean = std::move(tm.mean);
    out.trimmed_fraction = std::move(tm.trimmed_fraction);
    double s = 0.0;
    for (auto c : tm.survivors) s += static_cast<double>(c);
    out.summary.mean_survivors = tm.survivors.empty() ? 0.0 : s / static_cast<double>(tm.survivors.size());
  } else {
    mean = coordinate_mean(deltas, w);
    out.trimmed_fraction.assign(deltas.size(), 0.0);
    out.summary.mean_survivors = static_cast<double>(deltas.size());
  }

  const auto noised = add_laplace(mean, priv.sensitivity, priv.epsilon, rng, priv.zero_noise);
  out.model.weights = global.weights;
  for (std::size_t j = 0; j < noised.size(); ++j) out.model.weights[j] += noised[j];
  out.model.round = global.round + 1;
  out.summary.round = out.model.round;
  out.summary.aggregate_norm = l2_norm(noised);
  out.summary.budget = accountant.charge(1);
  return out;
}

}  // namespace haven::fed
