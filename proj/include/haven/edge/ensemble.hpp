#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "haven/edge/scorers.hpp"
#include "haven/sensors/feature.hpp"

namespace haven::edge {

/// Softmax weighting of historical scorer accuracies.
struct EnsembleWeights {
  std::vector<double> accuracies;
  double temperature = 1.0;
  std::vector<double> weights;
};

/// w_i = exp(a_i / T) / sum_j exp(a_j / T). Throws std::invalid_argument for
/// a non-positive temperature or empty accuracies.
EnsembleWeights compute_weights(std::span<const double> accuracies, double temperature);

/// EMA update of one scorer's accuracy followed by re-weighting:
/// a_i <- decay * a_i + (1 - decay) * outcome. Throws std::out_of_range for
/// a bad index.
EnsembleWeights update_accuracy(const EnsembleWeights& state, std::size_t scorer_index, bool outcome,
                                double decay = 0.99);

struct DetectorConfig {
  double theta1 = 0.7;  // anomaly-score threshold
  double theta2 = 0.8;  // confidence threshold
  double temperature = 1.0;
};

/// Throws ConfigError when a threshold lies outside (0,1) or the temperature
/// is not positive. Setting `allow_degenerate` accepts thresholds of exactly
/// 0 (used for negative-control runs).
void validate(const DetectorConfig& cfg, bool allow_degenerate = false);

enum class ThreatLevel : std::uint8_t { Low = 0, Medium = 1, High = 2 };
std::string_view to_string(ThreatLevel l);
/// Low < 0.7 <= Medium < 0.85 <= High.
ThreatLevel threat_level_for(double severity);

struct AnomalyVerdict {
  double anomaly_score = 0.0;
  double confidence = 0.0;
  double ensemble_variance = 0.0;
  bool is_anomaly = false;
  double severity = 0.0;
  ThreatLevel threat_level = ThreatLevel::Low;
  std::int64_t inference_time_us = 0;
};

/// Pure ensemble arithmetic over already-computed scorer outputs. Throws
/// std::invalid_argument when the output and weight counts differ.
AnomalyVerdict combine(std::span<const ScorerOutput> outputs, std::span<const double> weights,
                       const DetectorConfig& cfg);

using ScorerSet = std::vector<std::shared_ptr<const BaseScorer>>;

/// Extracts window features once, queries every scorer, combines, and
/// records the wall-clock time of the whole call.
AnomalyVerdict ensemble_predict(const sensors::FeatureWindow& window, const ScorerSet& scorers,
                                const EnsembleWeights& weights, const DetectorConfig& cfg);
/// Same, reusing precomputed features (the timing then excludes extraction).
AnomalyVerdict ensemble_predict(const WindowFeatures& features, const ScorerSet& scorers,
                                const EnsembleWeights& weights, const DetectorConfig& cfg);

}  // namespace haven::edge
