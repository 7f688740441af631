#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "haven/common/rng.hpp"
#include "haven/edge/scorers.hpp"

namespace haven::edge {

MarginScorer::MarginScorer(Standardizer standardizer, std::vector<double> weights, double bias)
    : standardizer_(std::move(standardizer)), weights_(std::move(weights)), bias_(bias) {
  if (weights_.size() != kSummaryDim || standardizer_.dim() != kSummaryDim) {
    throw std::invalid_argument("MarginScorer: weight dimension must equal the summary dimension");
  }
}

MarginScorer MarginScorer::train(const TrainingSet& data, std::uint64_t seed, Params params) {
  if (data.size() == 0) throw std::invalid_argument("MarginScorer::train: empty training set");
  std::vector<Summary> rows;
  rows.reserve(data.size());
  for (const auto& f : data.features) rows.push_back(f.summary);
  auto standardizer = Standardizer::fit<Summary>(rows, params.feature_clip);

  std::vector<std::vector<double>> x(data.size(), std::vector<double>(kSummaryDim));
  std::size_t positives = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < kSummaryDim; ++j) x[i][j] = standardizer.apply(j, rows[i][j]);
    positives += static_cast<std::size_t>(data.labels[i]);
  }
  const double n = static_cast<double>(data.size());
  const double pos_weight = positives ? n / (2.0 * static_cast<double>(positives)) : 1.0;
  const double neg_weight = positives < data.size() ? n / (2.0 * (n - static_cast<double>(positives))) : 1.0;

  std::vector<double> w(kSummaryDim, 0.0);
  double b = 0.0;
  Rng rng(seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const double eta0 = 0.05;
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (auto i : order) {
      const double eta = eta0 / (1.0 + eta0 * params.lambda * static_cast<double>(t++));
      const double y = data.labels[i] ? 1.0 : -1.0;
      const double cw = data.labels[i] ? pos_weight : neg_weight;
      double m = b;
      for (std::size_t j = 0; j < kSummaryDim; ++j) m += w[j] * x[i][j];
      const double shrink = 1.0 - eta * params.lambda;
      for (auto& wj : w) wj *= shrink;
      if (y * m < 1.0) {
        for (std::size_t j = 0; j < kSummaryDim; ++j) w[j] += eta * cw * y * x[i][j];
        b += eta * cw * y;
      }
    }
  }
  return MarginScorer(std::move(standardizer), std::move(w), b);
}

std::vector<double> MarginScorer::standardize(const Summary& s) const {
  std::vector<double> z(kSummaryDim);
  for (std::size_t j = 0; j < kSummaryDim; ++j) z[j] = standardizer_.apply(j, s[j]);
  return z;
}

double MarginScorer::margin(const Summary& s) const {
  double m = bias_;
  for (std::size_t j = 0; j < kSummaryDim; ++j) m += weights_[j] * standardizer_.apply(j, s[j]);
  return m;
}

ScorerOutput MarginScorer::predict(const WindowFeatures& f) const {
  const double m = margin(f.summary);
  return {logistic(m), 1.0 - logistic(std::abs(m))};
}

std::vector<double> MarginScorer::head() const {
  std::vector<double> h(weights_);
  h.push_back(bias_);
  return h;
}

MarginScorer MarginScorer::with_head(std::span<const double> head) const {
  if (head.size() != kSummaryDim + 1) throw std::invalid_argument("MarginScorer::with_head: wrong dimension");
  for (double v : head) {
    if (!std::isfinite(v)) throw std::invalid_argument("MarginScorer::with_head: non-finite parameter");
  }
  return MarginScorer(standardizer_, std::vector<double>(head.begin(), head.end() - 1), head.back());
}

}  // namespace haven::edge
