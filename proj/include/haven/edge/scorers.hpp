#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "haven/edge/window_features.hpp"

namespace haven::edge {

enum class ScorerKind { Forest, Margin, Recurrent };
std::string_view to_string(ScorerKind k);

/// Both fields lie in [0,1].
struct ScorerOutput {
  double score = 0.0;
  double uncertainty = 0.0;
};

/// A trained base detector f_i: window -> (anomaly probability, uncertainty).
/// Implementations are immutable after training and safe to share across
/// threads.
class BaseScorer {
 public:
  virtual ~BaseScorer() = default;
  virtual ScorerKind kind() const = 0;
  virtual ScorerOutput predict(const WindowFeatures& f) const = 0;
};

/// Training rows: precomputed features plus 0/1 labels.
struct TrainingSet {
  std::vector<WindowFeatures> features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

/// Bagged depth-limited CART trees over the window summary. The score is the
/// fraction of trees voting "attack"; the uncertainty is the vote variance
/// p(1 - p).
class ForestScorer final : public BaseScorer {
 public:
  struct Params {
    std::size_t trees = 25;
    std::size_t max_depth = 6;
    std::size_t min_leaf = 3;
    std::size_t candidate_thresholds = 12;
  };

  static ForestScorer train(const TrainingSet& data, std::uint64_t seed, Params params);
  static ForestScorer train(const TrainingSet& data, std::uint64_t seed) { return train(data, seed, Params{}); }

  ScorerKind kind() const override { return ScorerKind::Forest; }
  ScorerOutput predict(const WindowFeatures& f) const override;

  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int vote = 0;
  };
  using Tree = std::vector<Node>;

  const std::vector<Tree>& trees() const { return trees_; }

 private:
  std::vector<Tree> trees_;
};

/// Linear max-margin classifier on standardized summaries, trained by
/// hinge-loss subgradient descent. score = logistic(margin), uncertainty =
/// 1 - logistic(|margin|).
class MarginScorer final : public BaseScorer {
 public:
  struct Params {
    double lambda = 1e-3;
    std::size_t epochs = 40;
    double feature_clip = 20.0;
  };

  MarginScorer(Standardizer standardizer, std::vector<double> weights, double bias);

  static MarginScorer train(const TrainingSet& data, std::uint64_t seed, Params params);
  static MarginScorer train(const TrainingSet& data, std::uint64_t seed) { return train(data, seed, Params{}); }

  ScorerKind kind() const override { return ScorerKind::Margin; }
  ScorerOutput predict(const WindowFeatures& f) const override;

  double margin(const Summary& s) const;
  /// Standardized (and clipped) summary, the input space of the linear head.
  std::vector<double> standardize(const Summary& s) const;

  /// Linear head as one parameter vector [w_0 .. w_{d-1}, bias]; this is the
  /// vector the regional federated rounds update.
  std::vector<double> head() const;
  MarginScorer with_head(std::span<const double> head) const;

  const Standardizer& standardizer() const { return standardizer_; }

 private:
  Standardizer standardizer_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

/// Single Elman cell (tanh) over the per-step inputs, mean-pooled hidden
/// state and a logistic head. The uncertainty is the binary entropy of the
/// output in bits.
class RecurrentScorer final : public BaseScorer {
 public:
  struct Params {
    std::size_t hidden = 8;
    std::size_t epochs = 6;
    double learning_rate = 0.01;
    double input_clip = 10.0;
  };

  static RecurrentScorer train(const TrainingSet& data, std::uint64_t seed, Params params);
  static RecurrentScorer train(const TrainingSet& data, std::uint64_t seed) { return train(data, seed, Params{}); }

  ScorerKind kind() const override { return ScorerKind::Recurrent; }
  ScorerOutput predict(const WindowFeatures& f) const override;

  /// Raw probability for a sequence (no entropy).
  double probability(std::span<const StepInput> steps) const;

 private:
  struct Weights {
    std::size_t hidden = 0;
    std::vector<double> wx;  // hidden x kStepDim
    std::vector<double> wh;  // hidden x hidden
    std::vector<double> b;   // hidden
    std::vector<double> v;   // hidden
    double c = 0.0;
  };

  Standardizer standardizer_;
  Weights w_;
};

double logistic(double x);
/// Binary entropy in bits, 0 at p in {0,1}, 1 at p = 0.5.
double binary_entropy_bits(double p);

}  // namespace haven::edge
