#include "haven/edge/ensemble.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "haven/common/types.hpp"

namespace haven::edge {

EnsembleWeights compute_weights(std::span<const double> accuracies, double temperature) {
  if (accuracies.empty()) throw std::invalid_argument("compute_weights: no accuracies");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("compute_weights: temperature must be positive");
  }
  EnsembleWeights out;
  out.accuracies.assign(accuracies.begin(), accuracies.end());
  out.temperature = temperature;
  // Shifting by the max leaves the softmax unchanged and avoids overflow.
  const double top = *std::max_element(accuracies.begin(), accuracies.end());
  double z = 0.0;
  out.weights.resize(accuracies.size());
  for (std::size_t i = 0; i < accuracies.size(); ++i) {
    out.weights[i] = std::exp((accuracies[i] - top) / temperature);
    z += out.weights[i];
  }
  for (auto& w : out.weights) w /= z;
  return out;
}

EnsembleWeights update_accuracy(const EnsembleWeights& state, std::size_t scorer_index, bool outcome, double decay) {
  if (scorer_index >= state.accuracies.size()) throw std::out_of_range("update_accuracy: scorer index out of range");
  if (decay < 0.0 || decay > 1.0) throw std::invalid_argument("update_accuracy: decay must lie in [0,1]");
  auto acc = state.accuracies;
  acc[scorer_index] = decay * acc[scorer_index] + (1.0 - decay) * (outcome ? 1.0 : 0.0);
  return compute_weights(acc, state.temperature);
}

void validate(const DetectorConfig& cfg, bool allow_degenerate) {
  const auto in_range = [&](double v) { return allow_degenerate ? (v >= 0.0 && v < 1.0) : (v > 0.0 && v < 1.0); };
  if (!in_range(cfg.theta1)) throw ConfigError("theta1", "must lie in (0,1)");
  if (!in_range(cfg.theta2)) throw ConfigError("theta2", "must lie in (0,1)");
  if (!(cfg.temperature > 0.0)) throw ConfigError("temperature", "must be positive");
}

std::string_view to_string(ThreatLevel l) {
  switch (l) {
    case ThreatLevel::Low: return "Low";
    case ThreatLevel::Medium: return "Medium";
    case ThreatLevel::High: return "High";
  }
  return "Low";
}

ThreatLevel threat_level_for(double severity) {
  if (severity >= 0.85) return ThreatLevel::High;
  if (severity >= 0.7) return ThreatLevel::Medium;
  return ThreatLevel::Low;
}

AnomalyVerdict combine(std::span<const ScorerOutput> outputs, std::span<const double> weights,
                       const DetectorConfig& cfg) {
  if (outputs.size() != weights.size() || outputs.empty()) {
    throw std::invalid_argument("combine: scorer and weight counts differ");
  }
  AnomalyVerdict v;
  double mean_unc = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    v.anomaly_score += weights[i] * outputs[i].score;
    mean_unc += outputs[i].uncertainty;
  }
  mean_unc /= static_cast<double>(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const double d = outputs[i].score - v.anomaly_score;
    v.ensemble_variance += weights[i] * d * d;
  }
  v.anomaly_score = std::clamp(v.anomaly_score, 0.0, 1.0);
  v.confidence = std::clamp(1.0 - mean_unc, 0.0, 1.0);
  v.is_anomaly = v.anomaly_score > cfg.theta1 && v.confidence > cfg.theta2;
  v.severity = v.anomaly_score;
  v.threat_level = threat_level_for(v.severity);
  return v;
}

namespace {

AnomalyVerdict predict_with(const WindowFeatures& f, const ScorerSet& scorers, const EnsembleWeights& weights,
                            const DetectorConfig& cfg) {
  if (scorers.size() != weights.weights.size()) {
    throw std::invalid_argument("ensemble_predict: scorer and weight counts differ");
  }
  std::vector<ScorerOutput> outs;
  outs.reserve(scorers.size());
  for (const auto& s : scorers) outs.push_back(s->predict(f));
  return combine(outs, weights.weights, cfg);
}

std::int64_t elapsed_us(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

AnomalyVerdict ensemble_predict(const sensors::FeatureWindow& window, const ScorerSet& scorers,
                                const EnsembleWeights& weights, const DetectorConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (scorers.size() != weights.weights.size()) {
    throw std::invalid_argument("ensemble_predict: scorer and weight counts differ");
  }
  auto v = predict_with(extract_features(window), scorers, weights, cfg);
  v.inference_time_us = elapsed_us(start);
  return v;
}

AnomalyVerdict ensemble_predict(const WindowFeatures& features, const ScorerSet& scorers,
                                const EnsembleWeights& weights, const DetectorConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  auto v = predict_with(features, scorers, weights, cfg);
  v.inference_time_us = elapsed_us(start);
  return v;
}

}  // namespace haven::edge
