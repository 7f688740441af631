#include "haven/sensors/feature.hpp"

#include <cmath>
#include <stdexcept>

namespace haven::sensors {

double FeatureVector::quat_norm() const {
  return std::sqrt(quat_w * quat_w + quat_x * quat_x + quat_y * quat_y + quat_z * quat_z);
}

std::string validate(const FeatureVector& v, bool require_unit_quaternion) {
  const double fields[] = {v.lidar_point_density, v.lidar_mean_distance, v.lidar_height_variance,
                           v.lidar_spatial_density, v.cam_brightness,    v.cam_contrast,
                           v.cam_sharpness,         v.cam_saturation,    v.pos_x,
                           v.pos_y,                 v.pos_z,             v.quat_w,
                           v.quat_x,                v.quat_y,            v.quat_z,
                           v.actuator_response_ms};
  for (double f : fields) {
    if (!std::isfinite(f)) return "non-finite field";
  }
  if (v.lidar_point_density < 0 || v.lidar_mean_distance < 0 || v.lidar_height_variance < 0 ||
      v.lidar_spatial_density < 0) {
    return "negative lidar density/variance field";
  }
  for (double c : {v.cam_brightness, v.cam_contrast, v.cam_sharpness, v.cam_saturation}) {
    if (c < 0.0 || c > 1.0) return "camera statistic outside [0,1]";
  }
  if (v.actuator_response_ms < 0) return "negative actuator response";
  if (require_unit_quaternion && std::abs(v.quat_norm() - 1.0) > 1e-6) {
    return "quaternion norm differs from 1 by more than 1e-6";
  }
  return {};
}

std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::GpsSpoof: return "GpsSpoof";
    case AttackKind::LidarSpoof: return "LidarSpoof";
    case AttackKind::CameraPatch: return "CameraPatch";
    case AttackKind::ImuManip: return "ImuManip";
    case AttackKind::CommJam: return "CommJam";
    case AttackKind::MlPoison: return "MlPoison";
    case AttackKind::ActuatorCompromise: return "ActuatorCompromise";
  }
  return "Unknown";
}

AttackKind attack_kind_from_string(std::string_view s) {
  for (auto k : kAllAttackKinds) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown attack kind '" + std::string(s) + "'");
}

bool perturbs_features(AttackKind k) { return k != AttackKind::CommJam && k != AttackKind::MlPoison; }

void validate(const AttackScenario& s) {
  if (!(s.intensity > 0.0 && s.intensity <= 1.0)) {
    throw std::invalid_argument("attack intensity must lie in (0,1]");
  }
  if (s.start_ms >= s.end_ms) throw std::invalid_argument("attack start_ms must be < end_ms");
  if (s.target_vehicles.empty()) throw std::invalid_argument("attack target set is empty");
}

LabeledStream as_labeled(const std::vector<FeatureVector>& stream) {
  LabeledStream out;
  out.reserve(stream.size());
  for (const auto& x : stream) out.push_back({x, std::nullopt});
  return out;
}

}  // namespace haven::sensors
