#include "haven/sensors/feature_csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace haven::sensors {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view cell, std::size_t row, std::string_view column) {
  T value{};
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end || cell.empty()) {
    throw FeatureCsvError(row, "non-numeric cell in column '" + std::string(column) + "': '" + std::string(cell) + "'");
  }
  return value;
}

}  // namespace

FeatureCsvError::FeatureCsvError(std::size_t row, const std::string& what)
    : std::runtime_error(row == 0 ? "header: " + what : "row " + std::to_string(row) + ": " + what), row_(row) {}

std::vector<FeatureVector> read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FeatureCsvError(0, "empty file");
  const auto header = split(trim_cr(line));
  const auto expected = split(kFeatureCsvHeader);
  if (header.size() < expected.size()) throw FeatureCsvError(0, "missing columns");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (header[i] != expected[i]) {
      throw FeatureCsvError(0, "expected column '" + std::string(expected[i]) + "' at position " +
                                   std::to_string(i + 1) + ", found '" + std::string(header[i]) + "'");
    }
  }
  const bool has_actuator = header.size() == expected.size() + 1;
  if (header.size() > expected.size() + 1 || (has_actuator && header.back() != kActuatorColumn)) {
    throw FeatureCsvError(0, "unexpected extra columns");
  }

  std::vector<FeatureVector> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const auto text = trim_cr(line);
    if (text.empty()) continue;
    ++row;
    const auto cells = split(text);
    if (cells.size() != header.size()) throw FeatureCsvError(row, "wrong number of cells");
    FeatureVector v;
    v.timestamp_ms = parse_number<std::int64_t>(cells[0], row, header[0]);
    double* fields[] = {&v.lidar_point_density, &v.lidar_mean_distance, &v.lidar_height_variance,
                        &v.lidar_spatial_density, &v.cam_brightness,   &v.cam_contrast,
                        &v.cam_sharpness,         &v.cam_saturation,   &v.pos_x,
                        &v.pos_y,                 &v.pos_z,            &v.quat_w,
                        &v.quat_x,                &v.quat_y,           &v.quat_z};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      *fields[i] = parse_number<double>(cells[i + 1], row, header[i + 1]);
    }
    if (has_actuator) v.actuator_response_ms = parse_number<double>(cells.back(), row, header.back());
    if (auto err = validate(v, true); !err.empty()) throw FeatureCsvError(row, err);
    if (!out.empty() && v.timestamp_ms <= out.back().timestamp_ms) {
      throw FeatureCsvError(row, "timestamps not strictly increasing");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<FeatureVector> ingest_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open feature CSV '" + path.string() + "'");
  return read_feature_csv(in);
}

void write_feature_csv(std::ostream& out, const std::vector<FeatureVector>& stream, bool with_actuator) {
  out << kFeatureCsvHeader;
  if (with_actuator) out << ',' << kActuatorColumn;
  out << '\n';
  char buf[64];
  auto put = [&](double d) {
    const int n = std::snprintf(buf, sizeof buf, "%.17g", d);
    out << ',' << std::string_view(buf, static_cast<std::size_t>(n));
  };
  for (const auto& v : stream) {
    out << v.timestamp_ms;
    for (double d : {v.lidar_point_density, v.lidar_mean_distance, v.lidar_height_variance, v.lidar_spatial_density,
                     v.cam_brightness, v.cam_contrast, v.cam_sharpness, v.cam_saturation, v.pos_x, v.pos_y, v.pos_z,
                     v.quat_w, v.quat_x, v.quat_y, v.quat_z}) {
      put(d);
    }
    if (with_actuator) put(v.actuator_response_ms);
    out << '\n';
  }
}

void export_feature_csv(const std::filesystem::path& path, const std::vector<FeatureVector>& stream,
                        bool with_actuator) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write feature CSV '" + path.string() + "'");
  write_feature_csv(out, stream, with_actuator);
}

}  // namespace haven::sensors
