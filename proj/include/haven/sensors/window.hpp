#pragma once

#include <cstddef>
#include <vector>

#include "haven/sensors/feature.hpp"

namespace haven::sensors {

inline constexpr std::size_t kDefaultWindowLength = 50;

/// Number of windows make_windows yields: floor((len - T) / stride) + 1.
std::size_t window_count(std::size_t len, std::size_t T, std::size_t stride);

/// Slices a single vehicle's stream into windows of T samples every `stride`
/// samples. A window is labeled attack iff any of its samples is; its kind is
/// the most frequent sample label. Throws std::invalid_argument on T or
/// stride of zero, a stream shorter than T, or non-uniform sample spacing.
std::vector<LabeledWindow> make_windows(const LabeledStream& stream, VehicleId vehicle, std::size_t T,
                                        std::size_t stride);

/// Labels a finished window from per-sample labels.
LabeledWindow label_window(FeatureWindow window, const std::vector<std::optional<AttackKind>>& labels);

}  // namespace haven::sensors
