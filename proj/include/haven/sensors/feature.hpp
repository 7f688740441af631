#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "haven/common/types.hpp"

namespace haven::sensors {

/// One 100 Hz sample of the multimodal feature stream.
struct FeatureVector {
  SimTimeMs timestamp_ms = 0;
  // LiDAR
  double lidar_point_density = 0.0;
  double lidar_mean_distance = 0.0;
  double lidar_height_variance = 0.0;
  double lidar_spatial_density = 0.0;
  // Camera, all in [0,1]
  double cam_brightness = 0.0;
  double cam_contrast = 0.0;
  double cam_sharpness = 0.0;
  double cam_saturation = 0.0;
  // GPS / IMU
  double pos_x = 0.0;
  double pos_y = 0.0;
  double pos_z = 0.0;
  double quat_w = 1.0;
  double quat_x = 0.0;
  double quat_y = 0.0;
  double quat_z = 0.0;
  // Auxiliary actuator response latency; the only channel ActuatorCompromise touches.
  double actuator_response_ms = kNominalActuatorResponseMs;

  static constexpr double kNominalActuatorResponseMs = 20.0;

  double quat_norm() const;

  bool operator==(const FeatureVector&) const = default;
};

/// Checks the range invariants. Returns an empty string when valid, otherwise
/// a description of the first violation. `require_unit_quaternion` applies the
/// clean-sample norm tolerance of 1e-6.
std::string validate(const FeatureVector& v, bool require_unit_quaternion);

enum class AttackKind {
  GpsSpoof,
  LidarSpoof,
  CameraPatch,
  ImuManip,
  CommJam,
  MlPoison,
  ActuatorCompromise,
};

inline constexpr std::array<AttackKind, 7> kAllAttackKinds = {
    AttackKind::GpsSpoof, AttackKind::LidarSpoof,  AttackKind::CameraPatch,       AttackKind::ImuManip,
    AttackKind::CommJam,  AttackKind::MlPoison,    AttackKind::ActuatorCompromise};

/// Kinds that perturb sensor features (the others act on the network or on FL).
inline constexpr std::array<AttackKind, 5> kSensorAttackKinds = {
    AttackKind::GpsSpoof, AttackKind::LidarSpoof, AttackKind::CameraPatch, AttackKind::ImuManip,
    AttackKind::ActuatorCompromise};

std::string_view to_string(AttackKind k);
/// Throws std::invalid_argument for unknown names.
AttackKind attack_kind_from_string(std::string_view s);
bool perturbs_features(AttackKind k);

struct AttackScenario {
  AttackKind kind = AttackKind::GpsSpoof;
  double intensity = 1.0;
  SimTimeMs start_ms = 0;  // inclusive
  SimTimeMs end_ms = 0;    // exclusive
  std::set<VehicleId> target_vehicles;

  bool active_at(SimTimeMs t) const { return t >= start_ms && t < end_ms; }
  bool targets(VehicleId v) const { return target_vehicles.contains(v); }
};

/// Throws std::invalid_argument when the scenario invariants do not hold.
void validate(const AttackScenario& s);

struct LabeledSample {
  FeatureVector x;
  std::optional<AttackKind> label;

  bool operator==(const LabeledSample&) const = default;
};

using LabeledStream = std::vector<LabeledSample>;

LabeledStream as_labeled(const std::vector<FeatureVector>& stream);

struct FeatureWindow {
  std::vector<FeatureVector> samples;
  VehicleId vehicle_id = 0;
  SimTimeMs window_start_ms = 0;
};

struct LabeledWindow {
  FeatureWindow window;
  bool is_attack = false;
  std::optional<AttackKind> attack_kind;
};

}  // namespace haven::sensors
