#include "haven/sensors/window.hpp"

#include <array>
#include <stdexcept>

namespace haven::sensors {

std::size_t window_count(std::size_t len, std::size_t T, std::size_t stride) {
  if (T == 0 || stride == 0 || len < T) return 0;
  return (len - T) / stride + 1;
}

LabeledWindow label_window(FeatureWindow window, const std::vector<std::optional<AttackKind>>& labels) {
  std::array<std::size_t, kAllAttackKinds.size()> counts{};
  std::optional<AttackKind> best;
  for (const auto& l : labels) {
    if (!l) continue;
    const auto i = static_cast<std::size_t>(*l);
    ++counts[i];
    if (!best || counts[i] > counts[static_cast<std::size_t>(*best)]) best = *l;
  }
  LabeledWindow out;
  out.window = std::move(window);
  out.is_attack = best.has_value();
  out.attack_kind = best;
  return out;
}

std::vector<LabeledWindow> make_windows(const LabeledStream& stream, VehicleId vehicle, std::size_t T,
                                        std::size_t stride) {
  if (T == 0) throw std::invalid_argument("make_windows: T must be >= 1");
  if (stride == 0) throw std::invalid_argument("make_windows: stride must be >= 1");
  if (stream.size() < T) throw std::invalid_argument("make_windows: stream shorter than window length");
  if (stream.size() >= 2) {
    const SimTimeMs period = stream[1].x.timestamp_ms - stream[0].x.timestamp_ms;
    if (period <= 0) throw std::invalid_argument("make_windows: timestamps not strictly increasing");
    for (std::size_t i = 1; i < stream.size(); ++i) {
      if (stream[i].x.timestamp_ms - stream[i - 1].x.timestamp_ms != period) {
        throw std::invalid_argument("make_windows: non-uniform sample spacing");
      }
    }
  }

  const std::size_t n = window_count(stream.size(), T, stride);
  std::vector<LabeledWindow> out;
  out.reserve(n);
  std::vector<std::optional<AttackKind>> labels(T);
  for (std::size_t w = 0; w < n; ++w) {
    const std::size_t begin = w * stride;
    FeatureWindow fw;
    fw.vehicle_id = vehicle;
    fw.window_start_ms = stream[begin].x.timestamp_ms;
    fw.samples.reserve(T);
    for (std::size_t i = 0; i < T; ++i) {
      fw.samples.push_back(stream[begin + i].x);
      labels[i] = stream[begin + i].label;
    }
    out.push_back(label_window(std::move(fw), labels));
  }
  return out;
}

}  // namespace haven::sensors
