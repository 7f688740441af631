#include "haven/edge/window_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace haven::edge {

namespace {

struct RunningStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  double max_abs_diff = 0.0;
  double prev = 0.0;
  std::size_t n = 0;

  void push(double v) {
    if (n > 0) max_abs_diff = std::max(max_abs_diff, std::abs(v - prev));
    prev = v;
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double stddev() const {
    if (n == 0) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n) - m * m));
  }
};

double yaw_of(const sensors::FeatureVector& v) {
  const double n = v.quat_norm();
  const double w = v.quat_w / n, x = v.quat_x / n, y = v.quat_y / n, z = v.quat_z / n;
  return std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
}

double angular_step(const sensors::FeatureVector& a, const sensors::FeatureVector& b) {
  const double dot = a.quat_w * b.quat_w + a.quat_x * b.quat_x + a.quat_y * b.quat_y + a.quat_z * b.quat_z;
  const double c = std::clamp(std::abs(dot) / (a.quat_norm() * b.quat_norm()), 0.0, 1.0);
  return 2.0 * std::acos(c);
}

double wrap_abs(double angle) { return std::abs(std::remainder(angle, 2.0 * std::numbers::pi)); }

}  // namespace

FeatureGroup group_of(std::size_t i) {
  if (i < 12) return FeatureGroup::Lidar;
  if (i < 24) return FeatureGroup::Camera;
  if (i < 28) return FeatureGroup::Gps;
  if (i < 31) return FeatureGroup::Imu;
  if (i == 31) return FeatureGroup::Consistency;
  if (i < kSummaryDim) return FeatureGroup::Actuator;
  throw std::out_of_range("group_of: summary index out of range");
}

std::vector<StepInput> step_inputs(const sensors::FeatureWindow& w) {
  const auto& s = w.samples;
  if (s.empty()) throw std::invalid_argument("step_inputs: empty window");
  const std::size_t T = s.size();

  std::vector<double> step(T, 0.0);
  for (std::size_t i = 1; i < T; ++i) step[i] = std::hypot(s[i].pos_x - s[i - 1].pos_x, s[i].pos_y - s[i - 1].pos_y);
  if (T > 1) step[0] = step[1];
  std::vector<double> sorted(step);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(T / 2), sorted.end());
  const double median_step = sorted[T / 2];

  std::vector<StepInput> out(T);
  for (std::size_t i = 0; i < T; ++i) {
    const auto& v = s[i];
    const std::size_t j = i == 0 ? std::min<std::size_t>(1, T - 1) : i;  // step index for differences
    const auto& cur = s[j];
    const auto& prev = s[j == 0 ? 0 : j - 1];
    const double motion = std::atan2(cur.pos_y - prev.pos_y, cur.pos_x - prev.pos_x);
    out[i] = {v.lidar_point_density,
              v.lidar_mean_distance,
              v.lidar_height_variance,
              v.lidar_spatial_density,
              v.cam_brightness,
              v.cam_contrast,
              v.cam_sharpness,
              v.cam_saturation,
              std::abs(step[i] - median_step),
              std::abs(cur.pos_z - prev.pos_z),
              std::abs(v.quat_norm() - 1.0),
              angular_step(prev, cur),
              T > 1 ? wrap_abs(yaw_of(cur) - motion) : 0.0,
              v.actuator_response_ms};
  }
  return out;
}

namespace {

Summary summarize(const sensors::FeatureWindow& w, const std::vector<StepInput>& steps) {
  const auto& s = w.samples;
  const std::size_t T = s.size();
  Summary out{};

  const auto channel = [&](std::size_t base, auto getter) {
    RunningStats st;
    for (const auto& v : s) st.push(getter(v));
    out[base] = st.mean();
    out[base + 1] = st.stddev();
    out[base + 2] = st.max_abs_diff;
  };
  channel(0, [](const auto& v) { return v.lidar_point_density; });
  channel(3, [](const auto& v) { return v.lidar_mean_distance; });
  channel(6, [](const auto& v) { return v.lidar_height_variance; });
  channel(9, [](const auto& v) { return v.lidar_spatial_density; });
  channel(12, [](const auto& v) { return v.cam_brightness; });
  channel(15, [](const auto& v) { return v.cam_contrast; });
  channel(18, [](const auto& v) { return v.cam_sharpness; });
  channel(21, [](const auto& v) { return v.cam_saturation; });
  channel(32, [](const auto& v) { return v.actuator_response_ms; });

  RunningStats step_len;
  double max_resid = 0.0, max_dz = 0.0, norm_dev = 0.0, ang_sum = 0.0, ang_max = 0.0, incons = 0.0;
  for (std::size_t i = 1; i < T; ++i) {
    step_len.push(std::hypot(s[i].pos_x - s[i - 1].pos_x, s[i].pos_y - s[i - 1].pos_y));
  }
  for (std::size_t i = 0; i < T; ++i) {
    max_resid = std::max(max_resid, steps[i][8]);
    max_dz = std::max(max_dz, steps[i][9]);
    norm_dev += steps[i][10];
    if (i > 0) {
      ang_sum += steps[i][11];
      ang_max = std::max(ang_max, steps[i][11]);
      incons += steps[i][12];
    }
  }
  const double pairs = T > 1 ? static_cast<double>(T - 1) : 1.0;
  out[24] = step_len.mean();
  out[25] = step_len.stddev();
  out[26] = max_resid;
  out[27] = max_dz;
  out[28] = norm_dev / static_cast<double>(T);
  out[29] = ang_sum / pairs;
  out[30] = ang_max;
  out[31] = incons / pairs;
  return out;
}

}  // namespace

Summary window_summary(const sensors::FeatureWindow& w) { return summarize(w, step_inputs(w)); }

WindowFeatures extract_features(const sensors::FeatureWindow& w) {
  WindowFeatures f;
  f.steps = step_inputs(w);
  f.summary = summarize(w, f.steps);
  return f;
}

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> scale)
    : mean_(std::move(mean)), scale_(std::move(scale)) {
  if (mean_.size() != scale_.size()) throw std::invalid_argument("Standardizer: size mismatch");
}

template <typename Row>
Standardizer Standardizer::fit(std::span<const Row> rows, double clip) {
  if (rows.empty()) throw std::invalid_argument("Standardizer::fit: no rows");
  const std::size_t d = rows.front().size();
  std::vector<double> mean(d, 0.0), var(d, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
  }
  for (auto& m : mean) m /= static_cast<double>(rows.size());
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) var[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
  }
  std::vector<double> scale(d);
  for (std::size_t j = 0; j < d; ++j) {
    scale[j] = std::sqrt(var[j] / static_cast<double>(rows.size())) + 1e-6 + 1e-3 * std::abs(mean[j]);
  }
  Standardizer s(std::move(mean), std::move(scale));
  s.clip_ = clip;
  return s;
}

template Standardizer Standardizer::fit<Summary>(std::span<const Summary>, double);
template Standardizer Standardizer::fit<StepInput>(std::span<const StepInput>, double);
template Standardizer Standardizer::fit<std::vector<double>>(std::span<const std::vector<double>>, double);

double Standardizer::apply(std::size_t column, double value) const {
  const double z = (value - mean_[column]) / scale_[column];
  return clip_ > 0.0 ? std::clamp(z, -clip_, clip_) : z;
}

Standardizer with_clip(Standardizer s, double clip) {
  s.clip_ = clip;
  return s;
}

}  // namespace haven::edge
