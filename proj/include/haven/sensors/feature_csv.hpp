#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "haven/sensors/feature.hpp"

namespace haven::sensors {

/// Required header, in order. A 17th column `actuator_response_ms` is
/// accepted; without it the nominal actuator latency is assumed.
inline constexpr std::string_view kFeatureCsvHeader =
    "timestamp_ms,lidar_point_density,lidar_mean_distance,lidar_height_variance,lidar_spatial_density,"
    "cam_brightness,cam_contrast,cam_sharpness,cam_saturation,pos_x,pos_y,pos_z,quat_w,quat_x,quat_y,quat_z";
inline constexpr std::string_view kActuatorColumn = "actuator_response_ms";

/// Ingest failure; `row()` is the 1-based data row (0 for header problems).
class FeatureCsvError : public std::runtime_error {
 public:
  FeatureCsvError(std::size_t row, const std::string& what);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// One file holds one vehicle's stream.
std::vector<FeatureVector> read_feature_csv(std::istream& in);
std::vector<FeatureVector> ingest_feature_csv(const std::filesystem::path& path);

void write_feature_csv(std::ostream& out, const std::vector<FeatureVector>& stream, bool with_actuator = true);
void export_feature_csv(const std::filesystem::path& path, const std::vector<FeatureVector>& stream,
                        bool with_actuator = true);

}  // namespace haven::sensors
