#include "haven/sensors/generator.hpp"

#include "haven/sensors/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace haven::sensors {

namespace {
constexpr std::uint64_t kTagClean = 0x636c65616eULL;
}

DriveProfile DriveProfile::sample(Rng& rng) {
  DriveProfile p;
  p.speed_mps = rng.uniform(8.0, 30.0);
  p.speed_std = 0.04 * p.speed_mps;
  p.yaw_rate_std = rng.uniform(0.02, 0.08);
  p.lidar_density_mean = rng.uniform(0.8, 1.2);
  p.lidar_distance_mean = rng.uniform(18.0, 35.0);
  p.lidar_height_var_mean = rng.uniform(1.5, 2.5);
  p.lidar_spatial_mean = rng.uniform(0.6, 1.0);
  p.cam_brightness_mean = rng.uniform(0.3, 0.7);
  p.cam_contrast_mean = rng.uniform(0.35, 0.55);
  p.cam_sharpness_mean = rng.uniform(0.5, 0.7);
  p.cam_saturation_mean = rng.uniform(0.4, 0.6);
  return p;
}

CleanStreamGenerator::CleanStreamGenerator(std::uint64_t seed, VehicleId vehicle, DriveProfile profile)
    : profile_(profile),
      rng_(derive_seed(seed, {kTagClean, vehicle})),
      speed_(profile.speed_mps),
      heading_(rng_.uniform(-std::numbers::pi, std::numbers::pi)),
      x_(rng_.uniform(-5000.0, 5000.0)),
      y_(rng_.uniform(-5000.0, 5000.0)),
      density_(profile.lidar_density_mean),
      distance_(profile.lidar_distance_mean),
      height_var_(profile.lidar_height_var_mean),
      spatial_(profile.lidar_spatial_mean),
      brightness_(profile.cam_brightness_mean),
      contrast_(profile.cam_contrast_mean),
      sharpness_(profile.cam_sharpness_mean),
      saturation_(profile.cam_saturation_mean),
      actuator_(FeatureVector::kNominalActuatorResponseMs) {
  if (profile.sample_period_ms <= 0) throw std::invalid_argument("sample period must be positive");
}

double CleanStreamGenerator::ar1(double current, double mean, double stddev) {
  const double rho = profile_.reversion;
  return mean + rho * (current - mean) + stddev * std::sqrt(1.0 - rho * rho) * rng_.normal();
}

FeatureVector CleanStreamGenerator::next() {
  const auto& p = profile_;
  const double dt = static_cast<double>(p.sample_period_ms) / 1000.0;

  FeatureVector v;
  v.timestamp_ms = t_;
  v.lidar_point_density = density_;
  v.lidar_mean_distance = distance_;
  v.lidar_height_variance = height_var_;
  v.lidar_spatial_density = spatial_;
  v.cam_brightness = brightness_;
  v.cam_contrast = contrast_;
  v.cam_sharpness = sharpness_;
  v.cam_saturation = saturation_;
  v.pos_x = x_;
  v.pos_y = y_;
  v.pos_z = z_;

  // ZYX Euler -> quaternion.
  const double cy = std::cos(heading_ / 2), sy = std::sin(heading_ / 2);
  const double cp = std::cos(pitch_ / 2), sp = std::sin(pitch_ / 2);
  const double cr = std::cos(roll_ / 2), sr = std::sin(roll_ / 2);
  double qw = cr * cp * cy + sr * sp * sy;
  double qx = sr * cp * cy - cr * sp * sy;
  double qy = cr * sp * cy + sr * cp * sy;
  double qz = cr * cp * sy - sr * sp * cy;
  const double n = std::sqrt(qw * qw + qx * qx + qy * qy + qz * qz);
  v.quat_w = qw / n;
  v.quat_x = qx / n;
  v.quat_y = qy / n;
  v.quat_z = qz / n;
  v.actuator_response_ms = actuator_;

  if (glitch_left_ == 0 && p.glitch_rate_hz > 0.0 && rng_.bernoulli(p.glitch_rate_hz * dt)) {
    // Weak, short imitation of a sensor-attack pattern; unlabeled.
    static constexpr AttackKind kGlitchKinds[] = {AttackKind::GpsSpoof, AttackKind::LidarSpoof,
                                                  AttackKind::CameraPatch, AttackKind::ActuatorCompromise};
    glitch_kind_ = static_cast<int>(rng_.uniform_int(0, 3));
    glitch_left_ = static_cast<int>(rng_.uniform_int(10, 60));
    glitch_mag_ = rng_.uniform(0.03, std::max(0.03, p.glitch_scale_max));
    glitch_start_ = v.timestamp_ms;
    glitch_key_ = rng_.next_u64();
    glitch_attack_ = kGlitchKinds[glitch_kind_];
  }
  if (glitch_left_ > 0) {
    --glitch_left_;
    v = apply_perturbation(v, glitch_attack_, glitch_mag_, glitch_start_, glitch_key_);
  }

  // Advance state.
  t_ += p.sample_period_ms;
  speed_ = std::max(1.0, ar1(speed_, p.speed_mps, p.speed_std));
  yaw_rate_ = ar1(yaw_rate_, 0.0, p.yaw_rate_std);
  heading_ = std::remainder(heading_ + yaw_rate_ * dt, 2.0 * std::numbers::pi);
  pitch_ = ar1(pitch_, 0.0, 0.01);
  roll_ = ar1(roll_, 0.0, 0.01);
  x_ += speed_ * dt * std::cos(heading_);
  y_ += speed_ * dt * std::sin(heading_);
  z_ = ar1(z_, 0.0, 0.05);

  density_ = std::max(0.0, ar1(density_, p.lidar_density_mean, p.lidar_rel_std * p.lidar_density_mean));
  distance_ = std::max(0.0, ar1(distance_, p.lidar_distance_mean, p.lidar_rel_std * p.lidar_distance_mean));
  height_var_ =
      std::max(0.0, ar1(height_var_, p.lidar_height_var_mean, p.lidar_rel_std * p.lidar_height_var_mean));
  spatial_ = std::max(0.0, ar1(spatial_, p.lidar_spatial_mean, p.lidar_rel_std * p.lidar_spatial_mean));
  brightness_ = std::clamp(ar1(brightness_, p.cam_brightness_mean, p.cam_std), 0.0, 1.0);
  contrast_ = std::clamp(ar1(contrast_, p.cam_contrast_mean, p.cam_std), 0.0, 1.0);
  sharpness_ = std::clamp(ar1(sharpness_, p.cam_sharpness_mean, p.cam_std), 0.0, 1.0);
  saturation_ = std::clamp(ar1(saturation_, p.cam_saturation_mean, p.cam_std), 0.0, 1.0);
  actuator_ = std::max(0.0, ar1(actuator_, FeatureVector::kNominalActuatorResponseMs, p.actuator_std_ms));
  return v;
}

std::vector<FeatureVector> generate_clean_stream(std::uint64_t seed, VehicleId vehicle, SimTimeMs duration_ms,
                                                 const DriveProfile& profile) {
  if (duration_ms <= 0) throw std::invalid_argument("generate_clean_stream: duration must be positive");
  if (profile.sample_period_ms <= 0) throw std::invalid_argument("generate_clean_stream: zero sample period");
  if (duration_ms % profile.sample_period_ms != 0) {
    throw std::invalid_argument("generate_clean_stream: sample period must divide duration");
  }
  CleanStreamGenerator gen(seed, vehicle, profile);
  std::vector<FeatureVector> out;
  const auto n = static_cast<std::size_t>(duration_ms / profile.sample_period_ms);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.next());
  return out;
}

}  // namespace haven::sensors
