#include "haven/sensors/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "haven/common/rng.hpp"

namespace haven::sensors {

namespace {

constexpr std::uint64_t kTagAttack = 0x61747461636bULL;

struct NoiseKey {
  std::uint64_t base;
  double normal(std::uint64_t channel) const { return hash_normal(mix64(base ^ (channel * 0x9e3779b97f4a7c15ULL))); }
  /// Normal draw clipped to [-1, 1]; keeps perturbation signs fixed.
  double bounded(std::uint64_t channel) const { return std::clamp(normal(channel), -1.0, 1.0); }
};

void perturb_gps(FeatureVector& v, SimTimeMs start, double m, const NoiseKey& key, std::uint64_t episode) {
  // Drag-off drift along a fixed bearing plus a noisy spoofed fix.
  const double bearing = 2.0 * std::numbers::pi * hash_uniform(episode ^ 0x67707362ULL);
  const double tau_s = static_cast<double>(v.timestamp_ms - start) / 1000.0;
  const double drift = 25.0 * tau_s;
  v.pos_x += m * (drift * std::cos(bearing) + 1.0 * key.normal(1));
  v.pos_y += m * (drift * std::sin(bearing) + 1.0 * key.normal(2));
  v.pos_z += m * 0.3 * key.normal(3);
}

void perturb_lidar(FeatureVector& v, double m, const NoiseKey& key) {
  v.lidar_point_density += m * (1.5 + 0.5 * key.bounded(1));
  v.lidar_mean_distance *= 1.0 - m * (0.5 + 0.2 * key.bounded(2));
  v.lidar_height_variance += m * (2.0 + 0.5 * key.bounded(3));
  v.lidar_spatial_density += m * (1.0 + 0.3 * key.bounded(4));
}

void perturb_camera(FeatureVector& v, double m, const NoiseKey& key) {
  auto shift = [&](double& field, double direction, std::uint64_t ch) {
    field = std::clamp(field + direction * m * (0.35 + 0.1 * key.bounded(ch)), 0.0, 1.0);
  };
  shift(v.cam_brightness, v.cam_brightness < 0.5 ? 1.0 : -1.0, 1);
  shift(v.cam_contrast, 1.0, 2);
  shift(v.cam_sharpness, -1.0, 3);
  shift(v.cam_saturation, 1.0, 4);
}

void perturb_imu(FeatureVector& v, SimTimeMs start, double m, const NoiseKey& key) {
  // Extra yaw applied in the world frame: q' = r * q. The motion implied by
  // the (untouched) position increments no longer matches the orientation.
  const double tau_s = static_cast<double>(v.timestamp_ms - start) / 1000.0;
  const double phi = m * (0.6 + 0.15 * std::min(tau_s / 2.0, 1.0) + 0.05 * key.bounded(1));
  const double rw = std::cos(phi / 2), rz = std::sin(phi / 2);
  const double w = v.quat_w, x = v.quat_x, y = v.quat_y, z = v.quat_z;
  const double scale = 1.0 + m * 0.03;
  v.quat_w = scale * (rw * w - rz * z);
  v.quat_x = scale * (rw * x - rz * y);
  v.quat_y = scale * (rw * y + rz * x);
  v.quat_z = scale * (rw * z + rz * w);
}

void perturb_actuator(FeatureVector& v, double m, const NoiseKey& key) {
  v.actuator_response_ms += m * (40.0 + 15.0 * key.bounded(1));
}

}  // namespace

double perturbation_scale(double intensity) {
  return kJustNoticeableScale + intensity * (1.0 - kJustNoticeableScale);
}

FeatureVector apply_perturbation(const FeatureVector& x, AttackKind kind, double m, SimTimeMs start,
                                 std::uint64_t episode) {
  FeatureVector v = x;
  const NoiseKey key{derive_seed(episode, {static_cast<std::uint64_t>(x.timestamp_ms)})};
  switch (kind) {
    case AttackKind::GpsSpoof: perturb_gps(v, start, m, key, episode); break;
    case AttackKind::LidarSpoof: perturb_lidar(v, m, key); break;
    case AttackKind::CameraPatch: perturb_camera(v, m, key); break;
    case AttackKind::ImuManip: perturb_imu(v, start, m, key); break;
    case AttackKind::ActuatorCompromise: perturb_actuator(v, m, key); break;
    case AttackKind::CommJam:
    case AttackKind::MlPoison: break;
    default: throw std::invalid_argument("apply_perturbation: unknown attack kind");
  }
  return v;
}

FeatureVector perturb_sample(const FeatureVector& x, const AttackScenario& s, VehicleId vehicle, std::uint64_t seed) {
  const std::uint64_t episode = derive_seed(
      seed, {kTagAttack, vehicle, static_cast<std::uint64_t>(s.kind), static_cast<std::uint64_t>(s.start_ms)});
  return apply_perturbation(x, s.kind, perturbation_scale(s.intensity), s.start_ms, episode);
}

LabeledStream inject_attack(LabeledStream stream, VehicleId vehicle, const AttackScenario& s, std::uint64_t seed) {
  validate(s);
  switch (s.kind) {
    case AttackKind::GpsSpoof:
    case AttackKind::LidarSpoof:
    case AttackKind::CameraPatch:
    case AttackKind::ImuManip:
    case AttackKind::CommJam:
    case AttackKind::MlPoison:
    case AttackKind::ActuatorCompromise: break;
    default: throw std::invalid_argument("inject_attack: unknown attack kind");
  }
  if (stream.empty() || s.end_ms <= stream.front().x.timestamp_ms || s.start_ms > stream.back().x.timestamp_ms) {
    throw std::invalid_argument("inject_attack: scenario time range does not intersect the stream");
  }
  if (!perturbs_features(s.kind) || !s.targets(vehicle)) return stream;
  for (auto& sample : stream) {
    if (!s.active_at(sample.x.timestamp_ms)) continue;
    sample.x = perturb_sample(sample.x, s, vehicle, seed);
    sample.label = s.kind;
  }
  return stream;
}

LabeledStream inject_attack(const std::vector<FeatureVector>& stream, VehicleId vehicle, const AttackScenario& s,
                            std::uint64_t seed) {
  return inject_attack(as_labeled(stream), vehicle, s, seed);
}

}  // namespace haven::sensors
