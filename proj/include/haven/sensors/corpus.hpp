#pragma once

#include <cstdint>
#include <vector>

#include "haven/sensors/feature.hpp"

namespace haven::sensors {

/// Seeded labeled-window corpus: `vehicles` synthetic vehicles driven for
/// `duration_ms`, with window-aligned attack episodes covering roughly
/// `attack_fraction` of the windows. Used for bootstrap training and tests.
struct CorpusSpec {
  std::size_t vehicles = 40;
  SimTimeMs duration_ms = 20'000;
  std::size_t window_length = 50;
  double attack_fraction = 0.4;
  std::vector<AttackKind> kinds{kSensorAttackKinds.begin(), kSensorAttackKinds.end()};
  double intensity_min = 0.3;
  double intensity_max = 1.0;
  std::size_t episode_min_windows = 2;
  std::size_t episode_max_windows = 5;
  double glitch_rate_hz = 0.0;
  double glitch_scale_max = 0.4;
};

std::vector<LabeledWindow> generate_labeled_corpus(std::uint64_t seed, const CorpusSpec& spec);

}  // namespace haven::sensors
