#include "haven/sensors/corpus.hpp"

#include <stdexcept>

#include "haven/common/rng.hpp"
#include "haven/sensors/attack.hpp"
#include "haven/sensors/generator.hpp"
#include "haven/sensors/window.hpp"

namespace haven::sensors {

std::vector<LabeledWindow> generate_labeled_corpus(std::uint64_t seed, const CorpusSpec& spec) {
  if (spec.kinds.empty()) throw std::invalid_argument("generate_labeled_corpus: no attack kinds");
  if (spec.episode_min_windows == 0 || spec.episode_max_windows < spec.episode_min_windows) {
    throw std::invalid_argument("generate_labeled_corpus: bad episode length range");
  }
  std::vector<LabeledWindow> out;
  Rng rng(derive_seed(seed, {0x636f72707573ULL}));
  for (std::size_t v = 0; v < spec.vehicles; ++v) {
    const auto vehicle = static_cast<VehicleId>(v);
    DriveProfile profile = DriveProfile::sample(rng);
    profile.glitch_rate_hz = spec.glitch_rate_hz;
    profile.glitch_scale_max = spec.glitch_scale_max;
    auto stream = as_labeled(generate_clean_stream(seed, vehicle, spec.duration_ms, profile));
    const SimTimeMs window_ms = static_cast<SimTimeMs>(spec.window_length) * profile.sample_period_ms;
    const auto n_windows = static_cast<std::size_t>(spec.duration_ms / window_ms);
    const auto budget = static_cast<std::size_t>(spec.attack_fraction * static_cast<double>(n_windows) + 0.5);

    std::size_t used = 0, w = 0;
    while (used < budget && w < n_windows) {
      // Random clean gap, then one episode.
      const auto gap_max = static_cast<std::int64_t>(
          (n_windows - w) > (budget - used) ? (n_windows - w - (budget - used)) / 2 : 0);
      w += static_cast<std::size_t>(rng.uniform_int(0, gap_max));
      if (w >= n_windows) break;
      const auto len = std::min<std::size_t>(
          {static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(spec.episode_min_windows),
                                                    static_cast<std::int64_t>(spec.episode_max_windows))),
           budget - used, n_windows - w});
      AttackScenario s;
      s.kind = spec.kinds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(spec.kinds.size()) - 1))];
      s.intensity = rng.uniform(spec.intensity_min, spec.intensity_max);
      s.start_ms = static_cast<SimTimeMs>(w) * window_ms;
      s.end_ms = static_cast<SimTimeMs>(w + len) * window_ms;
      s.target_vehicles = {vehicle};
      stream = inject_attack(std::move(stream), vehicle, s, seed);
      used += len;
      w += len;
    }
    auto windows = make_windows(stream, vehicle, spec.window_length, spec.window_length);
    out.insert(out.end(), std::make_move_iterator(windows.begin()), std::make_move_iterator(windows.end()));
  }
  return out;
}

}  // namespace haven::sensors
