#include "haven/edge/training.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "haven/common/rng.hpp"

namespace haven::edge {

TrainingSet to_training_set(const std::vector<sensors::LabeledWindow>& windows) {
  TrainingSet set;
  set.features.reserve(windows.size());
  set.labels.reserve(windows.size());
  for (const auto& w : windows) {
    set.features.push_back(extract_features(w.window));
    set.labels.push_back(w.is_attack ? 1 : 0);
  }
  return set;
}

double holdout_accuracy(const BaseScorer& scorer, const TrainingSet& data) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int predicted = scorer.predict(data.features[i]).score > 0.5 ? 1 : 0;
    correct += predicted == data.labels[i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainedDetector train_base_scorers(const std::vector<sensors::LabeledWindow>& windows, std::uint64_t seed,
                                   const TrainingParams& params) {
  if (windows.empty()) throw std::invalid_argument("train_base_scorers: empty training set");
  const auto positives = std::count_if(windows.begin(), windows.end(), [](const auto& w) { return w.is_attack; });
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(windows.size())) {
    throw std::invalid_argument("train_base_scorers: training set must contain both classes");
  }
  if (!(params.train_fraction > 0.0 && params.train_fraction < 1.0)) {
    throw std::invalid_argument("train_base_scorers: train_fraction must lie in (0,1)");
  }

  const TrainingSet all = to_training_set(windows);
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, {0x73706c6974ULL}));
  std::shuffle(order.begin(), order.end(), rng.engine());
  const auto n_train = std::max<std::size_t>(
      1, std::min(all.size() - 1, static_cast<std::size_t>(params.train_fraction * static_cast<double>(all.size()))));

  TrainingSet train, holdout;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& dst = k < n_train ? train : holdout;
    dst.features.push_back(all.features[order[k]]);
    dst.labels.push_back(all.labels[order[k]]);
  }

  TrainedDetector out;
  out.forest = std::make_shared<ForestScorer>(ForestScorer::train(train, derive_seed(seed, {1}), params.forest));
  out.margin = std::make_shared<MarginScorer>(MarginScorer::train(train, derive_seed(seed, {2}), params.margin));
  out.recurrent =
      std::make_shared<RecurrentScorer>(RecurrentScorer::train(train, derive_seed(seed, {3}), params.recurrent));
  out.accuracies = {holdout_accuracy(*out.forest, holdout), holdout_accuracy(*out.margin, holdout),
                    holdout_accuracy(*out.recurrent, holdout)};

  std::vector<Summary> clean;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.labels[i] == 0) clean.push_back(train.features[i].summary);
  }
  out.classifier = ThreatClassifier::fit(clean);
  return out;
}

}  // namespace haven::edge
