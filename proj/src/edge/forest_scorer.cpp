#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "haven/common/rng.hpp"
#include "haven/edge/scorers.hpp"

namespace haven::edge {

std::string_view to_string(ScorerKind k) {
  switch (k) {
    case ScorerKind::Forest: return "forest";
    case ScorerKind::Margin: return "margin";
    case ScorerKind::Recurrent: return "recurrent";
  }
  return "unknown";
}

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double binary_entropy_bits(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

namespace {

double gini(double pos, double total) {
  if (total <= 0) return 0.0;
  const double p = pos / total;
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const TrainingSet& data, const ForestScorer::Params& params, Rng& rng)
      : data_(data), params_(params), rng_(rng) {}

  ForestScorer::Tree build(std::vector<std::size_t> idx) {
    tree_.clear();
    grow(idx, 0);
    return std::move(tree_);
  }

 private:
  std::int32_t grow(std::vector<std::size_t>& idx, std::size_t depth) {
    const auto node_id = static_cast<std::int32_t>(tree_.size());
    tree_.emplace_back();
    std::size_t pos = 0;
    for (auto i : idx) pos += static_cast<std::size_t>(data_.labels[i]);
    const int majority = 2 * pos >= idx.size() ? 1 : 0;
    if (depth >= params_.max_depth || pos == 0 || pos == idx.size() || idx.size() < 2 * params_.min_leaf) {
      tree_[static_cast<std::size_t>(node_id)].vote = majority;
      return node_id;
    }

    const std::size_t d = kSummaryDim;
    const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    std::vector<std::size_t> features(d);
    std::iota(features.begin(), features.end(), 0);
    std::shuffle(features.begin(), features.end(), rng_.engine());

    const double parent = gini(static_cast<double>(pos), static_cast<double>(idx.size()));
    double best_gain = 1e-12;
    std::int32_t best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, int>> vals(idx.size());
    for (std::size_t f = 0; f < m; ++f) {
      const auto feat = features[f];
      for (std::size_t k = 0; k < idx.size(); ++k) {
        vals[k] = {data_.features[idx[k]].summary[feat], data_.labels[idx[k]]};
      }
      std::sort(vals.begin(), vals.end());
      // Prefix positives for O(1) split evaluation at any rank.
      std::vector<std::size_t> prefix(vals.size() + 1, 0);
      for (std::size_t k = 0; k < vals.size(); ++k) prefix[k + 1] = prefix[k] + static_cast<std::size_t>(vals[k].second);
      const std::size_t n = vals.size();
      for (std::size_t c = 1; c <= params_.candidate_thresholds; ++c) {
        std::size_t r = c * n / (params_.candidate_thresholds + 1);
        if (r < params_.min_leaf || n - r < params_.min_leaf) continue;
        // Move the cut to a boundary between distinct values.
        while (r < n && vals[r].first == vals[r - 1].first) ++r;
        if (r >= n || n - r < params_.min_leaf) continue;
        const double nl = static_cast<double>(r), nr = static_cast<double>(n - r);
        const double pl = static_cast<double>(prefix[r]), pr = static_cast<double>(prefix[n] - prefix[r]);
        const double child = (nl * gini(pl, nl) + nr * gini(pr, nr)) / static_cast<double>(n);
        const double gain = parent - child;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<std::int32_t>(feat);
          best_threshold = 0.5 * (vals[r - 1].first + vals[r].first);
        }
      }
    }
    if (best_feature < 0) {
      tree_[static_cast<std::size_t>(node_id)].vote = majority;
      return node_id;
    }

    std::vector<std::size_t> left, right;
    for (auto i : idx) {
      (data_.features[i].summary[static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    const auto l = grow(left, depth + 1);
    const auto r = grow(right, depth + 1);
    auto& node = tree_[static_cast<std::size_t>(node_id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    node.vote = majority;
    return node_id;
  }

  const TrainingSet& data_;
  const ForestScorer::Params& params_;
  Rng& rng_;
  ForestScorer::Tree tree_;
};

}  // namespace

ForestScorer ForestScorer::train(const TrainingSet& data, std::uint64_t seed, Params params) {
  if (data.size() == 0 || data.features.size() != data.size()) {
    throw std::invalid_argument("ForestScorer::train: empty or inconsistent training set");
  }
  if (params.trees == 0) throw std::invalid_argument("ForestScorer::train: need at least one tree");
  Rng rng(seed);
  ForestScorer forest;
  TreeBuilder builder(data, params, rng);
  const auto n = static_cast<std::int64_t>(data.size());
  for (std::size_t t = 0; t < params.trees; ++t) {
    std::vector<std::size_t> bag(data.size());
    for (auto& i : bag) i = static_cast<std::size_t>(rng.uniform_int(0, n - 1));
    forest.trees_.push_back(builder.build(std::move(bag)));
  }
  return forest;
}

ScorerOutput ForestScorer::predict(const WindowFeatures& f) const {
  std::size_t votes = 0;
  for (const auto& tree : trees_) {
    std::size_t node = 0;
    while (tree[node].feature >= 0) {
      const auto& n = tree[node];
      node = static_cast<std::size_t>(f.summary[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    votes += static_cast<std::size_t>(tree[node].vote);
  }
  const double p = static_cast<double>(votes) / static_cast<double>(trees_.size());
  return {p, p * (1.0 - p)};
}

}  // namespace haven::edge
