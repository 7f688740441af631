#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "haven/sensors/feature.hpp"

namespace haven::edge {

/// Fixed-length window summary consumed by the forest and margin scorers.
///   [0,12)  LiDAR: per channel mean, std, max |first difference|
///   [12,24) camera: same layout
///   [24,28) GPS: mean step, step std, max |step - median step|, max |dz|
///   [28,31) IMU: mean | |q| - 1 |, mean angular step, max angular step
///   31      heading/motion inconsistency (mean, rad)
///   [32,35) actuator response: mean, std, max |first difference|
inline constexpr std::size_t kSummaryDim = 35;
/// Per-sample inputs for the recurrent scorer.
inline constexpr std::size_t kStepDim = 14;

using Summary = std::array<double, kSummaryDim>;
using StepInput = std::array<double, kStepDim>;

struct WindowFeatures {
  Summary summary{};
  std::vector<StepInput> steps;
};

enum class FeatureGroup { Lidar, Camera, Gps, Imu, Consistency, Actuator };
inline constexpr std::size_t kFeatureGroupCount = 6;

FeatureGroup group_of(std::size_t summary_index);

std::vector<StepInput> step_inputs(const sensors::FeatureWindow& w);
Summary window_summary(const sensors::FeatureWindow& w);
/// Computes both representations in one pass over the window.
WindowFeatures extract_features(const sensors::FeatureWindow& w);

/// Per-column affine standardization with a scale floor.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> mean, std::vector<double> scale);

  template <typename Row>
  static Standardizer fit(std::span<const Row> rows, double clip = 0.0);

  double apply(std::size_t column, double value) const;
  std::size_t dim() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
  double clip_ = 0.0;  // 0 disables clipping

  friend Standardizer with_clip(Standardizer s, double clip);
};

Standardizer with_clip(Standardizer s, double clip);

}  // namespace haven::edge
