#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "haven/edge/ensemble.hpp"
#include "haven/edge/scorers.hpp"
#include "haven/edge/threat.hpp"
#include "haven/sensors/feature.hpp"

namespace haven::edge {

struct TrainingParams {
  double train_fraction = 0.7;
  ForestScorer::Params forest{};
  MarginScorer::Params margin{};
  RecurrentScorer::Params recurrent{};
};

/// Output of bootstrap training: the three scorers (forest, margin,
/// recurrent, in that order), their held-out accuracies, and a threat
/// classifier fitted on the clean training windows.
struct TrainedDetector {
  std::shared_ptr<const ForestScorer> forest;
  std::shared_ptr<const MarginScorer> margin;
  std::shared_ptr<const RecurrentScorer> recurrent;
  std::array<double, 3> accuracies{};
  ThreatClassifier classifier;

  ScorerSet scorers() const { return {forest, margin, recurrent}; }
};

TrainingSet to_training_set(const std::vector<sensors::LabeledWindow>& windows);

/// Splits `windows` (seeded shuffle) into train / held-out parts, trains all
/// three scorers on the first and measures each one's accuracy on the
/// second. Throws std::invalid_argument when the set is empty or contains a
/// single class.
TrainedDetector train_base_scorers(const std::vector<sensors::LabeledWindow>& windows, std::uint64_t seed,
                                   const TrainingParams& params = {});

/// Fraction of windows where (score > 0.5) matches the label.
double holdout_accuracy(const BaseScorer& scorer, const TrainingSet& data);

}  // namespace haven::edge
