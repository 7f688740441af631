#include "haven/fed/local_train.hpp"

#include <cmath>
#include <stdexcept>

namespace haven::fed {

namespace {

double dot_bias(std::span<const double> w, const std::vector<double>& x) {
  double z = w[x.size()];
  for (std::size_t j = 0; j < x.size(); ++j) z += w[j] * x[j];
  return z;
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LogisticObjective::LogisticObjective(std::vector<std::vector<double>> rows, std::vector<int> labels)
    : rows_(std::move(rows)), labels_(std::move(labels)) {
  if (rows_.size() != labels_.size()) throw std::invalid_argument("logistic objective: row/label count mismatch");
  if (!rows_.empty()) features_ = rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != features_) throw std::invalid_argument("logistic objective: ragged rows");
  }
  for (int y : labels_) {
    if (y != 0 && y != 1) throw std::invalid_argument("logistic objective: labels must be 0 or 1");
  }
}

double LogisticObjective::loss(std::span<const double> w) const {
  if (w.size() != dim()) throw std::invalid_argument("logistic objective: parameter dimension mismatch");
  if (rows_.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double z = dot_bias(w, rows_[i]);
    total += labels_[i] ? softplus(-z) : softplus(z);
  }
  return total / static_cast<double>(rows_.size());
}

std::vector<double> LogisticObjective::gradient(std::span<const double> w) const {
  if (w.size() != dim()) throw std::invalid_argument("logistic objective: parameter dimension mismatch");
  std::vector<double> g(dim(), 0.0);
  if (rows_.empty()) return g;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double r = sigmoid(dot_bias(w, rows_[i])) - labels_[i];
    for (std::size_t j = 0; j < features_; ++j) g[j] += r * rows_[i][j];
    g[features_] += r;
  }
  for (auto& v : g) v /= static_cast<double>(rows_.size());
  return g;
}

LogisticObjective LogisticObjective::flipped() const {
  auto labels = labels_;
  for (auto& y : labels) y = 1 - y;
  return LogisticObjective(rows_, std::move(labels));
}

QuadraticObjective::QuadraticObjective(std::vector<double> center, std::vector<double> curvature, std::size_t samples)
    : center_(std::move(center)), curvature_(std::move(curvature)), samples_(samples) {
  if (curvature_.empty()) curvature_.assign(center_.size(), 1.0);
  if (curvature_.size() != center_.size()) throw std::invalid_argument("quadratic objective: dimension mismatch");
}

double QuadraticObjective::loss(std::span<const double> w) const {
  if (w.size() != dim()) throw std::invalid_argument("quadratic objective: parameter dimension mismatch");
  double f = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) f += 0.5 * curvature_[j] * (w[j] - center_[j]) * (w[j] - center_[j]);
  return f;
}

std::vector<double> QuadraticObjective::gradient(std::span<const double> w) const {
  if (w.size() != dim()) throw std::invalid_argument("quadratic objective: parameter dimension mismatch");
  std::vector<double> g(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) g[j] = curvature_[j] * (w[j] - center_[j]);
  return g;
}

ClientUpdate local_train(const GlobalModel& global, const LocalObjective& objective, double learning_rate,
                         VehicleId vehicle) {
  if (objective.sample_count() == 0) throw std::invalid_argument("local_train: empty local data");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("local_train: learning rate must be > 0");
  ClientUpdate u;
  u.vehicle_id = vehicle;
  u.round = global.round;
  u.sample_count = objective.sample_count();
  u.delta = objective.gradient(global.weights);
  for (auto& g : u.delta) g *= -learning_rate;
  return u;
}

}  // namespace haven::fed
