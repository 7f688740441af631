#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "haven/common/rng.hpp"
#include "haven/fed/model.hpp"
#include "haven/fed/privacy.hpp"

namespace haven::fed {

enum class AggregationRule { TrimmedMean, PlainMean };

struct AggregatorConfig {
  double trim_ratio = 0.3;
  double learning_rate = 0.1;
  double round_interval_s = 30.0;
  /// Weight survivors by sample_count.
  bool weighted = false;
  AggregationRule rule = AggregationRule::TrimmedMean;

  void validate() const;
};

struct RoundSummary {
  std::uint64_t round = 0;  // round index that produced the new model
  std::size_t received = 0;
  std::size_t rejected = 0;
  std::size_t aggregated = 0;
  double mean_survivors = 0.0;
  double aggregate_norm = 0.0;
  PrivacyBudget budget;
};

struct RoundResult {
  GlobalModel model;
  RoundSummary summary;
  /// Per accepted update (same order as `accepted`): share of coordinates trimmed.
  std::vector<double> trimmed_fraction;
  std::vector<VehicleId> accepted;
};

/// One coordinator round: drop non-finite or stale updates, aggregate the
/// rest (trimmed mean when at least three remain, plain mean otherwise),
/// add Laplace noise once to the aggregate, apply it, charge one round.
RoundResult aggregate_round(const GlobalModel& global, std::span<const ClientUpdate> received,
                            const AggregatorConfig& agg, const PrivacyConfig& priv, PrivacyAccountant& accountant,
                            Rng& rng);

}  // namespace haven::fed
