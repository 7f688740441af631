#pragma once

#include <cstdint>
#include <vector>

#include "haven/common/rng.hpp"
#include "haven/sensors/feature.hpp"

namespace haven::sensors {

/// Per-vehicle driving/environment parameters for the clean feature process.
/// Every channel is a mean-reverting AR(1) process around its mean with the
/// given stationary standard deviation.
struct DriveProfile {
  SimTimeMs sample_period_ms = 10;
  double speed_mps = 12.0;
  double speed_std = 0.8;
  double yaw_rate_std = 0.05;  // rad/s
  double lidar_density_mean = 1.0;
  double lidar_distance_mean = 25.0;
  double lidar_height_var_mean = 2.0;
  double lidar_spatial_mean = 0.8;
  double lidar_rel_std = 0.03;  // stationary std as a fraction of the mean
  double cam_brightness_mean = 0.5;
  double cam_contrast_mean = 0.45;
  double cam_sharpness_mean = 0.6;
  double cam_saturation_mean = 0.5;
  double cam_std = 0.015;
  double actuator_std_ms = 0.5;
  double reversion = 0.97;  // per-sample AR(1) coefficient
  /// Benign, unlabeled glitches per simulated second: short, weak
  /// disturbances shaped like the attack patterns. 0 disables them.
  double glitch_rate_hz = 0.0;
  /// Glitch strength is drawn uniformly from [0.03, glitch_scale_max] on the
  /// attack perturbation scale.
  double glitch_scale_max = 0.4;

  /// Draws a plausible urban/highway, day/night variant.
  static DriveProfile sample(Rng& rng);
};

/// Incremental form of the clean generator. Successive `next()` calls yield
/// exactly the samples generate_clean_stream returns, so the simulator can
/// stream a vehicle window by window.
class CleanStreamGenerator {
 public:
  CleanStreamGenerator(std::uint64_t seed, VehicleId vehicle, DriveProfile profile);

  FeatureVector next();
  const DriveProfile& profile() const { return profile_; }

 private:
  double ar1(double current, double mean, double stddev);

  DriveProfile profile_;
  Rng rng_;
  SimTimeMs t_ = 0;
  double speed_;
  double heading_;
  double yaw_rate_ = 0.0;
  double pitch_ = 0.0;
  double roll_ = 0.0;
  double x_, y_, z_ = 0.0;
  double density_, distance_, height_var_, spatial_;
  double brightness_, contrast_, sharpness_, saturation_;
  double actuator_;
  int glitch_kind_ = -1;
  int glitch_left_ = 0;
  double glitch_mag_ = 0.0;
  SimTimeMs glitch_start_ = 0;
  std::uint64_t glitch_key_ = 0;
  AttackKind glitch_attack_ = AttackKind::GpsSpoof;
};

/// Returns duration_ms / sample_period samples starting at t = 0.
/// Throws std::invalid_argument for non-positive duration, a zero period, or
/// a period that does not divide the duration.
std::vector<FeatureVector> generate_clean_stream(std::uint64_t seed, VehicleId vehicle, SimTimeMs duration_ms,
                                                 const DriveProfile& profile = {});

}  // namespace haven::sensors
