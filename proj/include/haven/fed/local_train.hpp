#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "haven/fed/model.hpp"

namespace haven::fed {

/// Differentiable local loss F_k over a flat parameter vector.
class LocalObjective {
 public:
  virtual ~LocalObjective() = default;
  virtual std::size_t dim() const = 0;
  virtual std::size_t sample_count() const = 0;
  virtual double loss(std::span<const double> w) const = 0;
  virtual std::vector<double> gradient(std::span<const double> w) const = 0;
};

/// Mean logistic loss; parameters are [w_0 .. w_{d-1}, bias].
class LogisticObjective final : public LocalObjective {
 public:
  LogisticObjective(std::vector<std::vector<double>> rows, std::vector<int> labels);

  std::size_t dim() const override { return features_ + 1; }
  std::size_t sample_count() const override { return rows_.size(); }
  double loss(std::span<const double> w) const override;
  std::vector<double> gradient(std::span<const double> w) const override;

  /// Same points with every label inverted.
  LogisticObjective flipped() const;

  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::vector<int>& labels() const { return labels_; }

 private:
  std::vector<std::vector<double>> rows_;
  std::vector<int> labels_;
  std::size_t features_ = 0;
};

/// F(w) = 1/2 sum_j a_j (w_j - c_j)^2.
class QuadraticObjective final : public LocalObjective {
 public:
  QuadraticObjective(std::vector<double> center, std::vector<double> curvature, std::size_t samples = 1);

  std::size_t dim() const override { return center_.size(); }
  std::size_t sample_count() const override { return samples_; }
  double loss(std::span<const double> w) const override;
  std::vector<double> gradient(std::span<const double> w) const override;

 private:
  std::vector<double> center_;
  std::vector<double> curvature_;
  std::size_t samples_;
};

/// One full-batch gradient step from the global weights; the returned delta
/// is w_k^(t+1) - w^(t) = -lr * grad F_k(w^(t)).
ClientUpdate local_train(const GlobalModel& global, const LocalObjective& objective, double learning_rate,
                         VehicleId vehicle = 0);

}  // namespace haven::fed
