#pragma once

#include <cstdint>
#include <vector>

#include "haven/sensors/feature.hpp"

namespace haven::sensors {

/// Perturbation magnitude factor for an intensity in (0,1]: linear between a
/// just-noticeable floor and the saturating deviation (factor 1).
double perturbation_scale(double intensity);
inline constexpr double kJustNoticeableScale = 0.15;

/// Applies one kind's perturbation pattern at an explicit magnitude factor.
/// `episode_key` fixes the episode-level randomness (e.g. GPS drift bearing);
/// `episode_start_ms` anchors time-dependent ramps.
FeatureVector apply_perturbation(const FeatureVector& x, AttackKind kind, double scale, SimTimeMs episode_start_ms,
                                 std::uint64_t episode_key);

/// Pure per-sample perturbation. The noise is keyed on (seed, vehicle, kind,
/// attack start, timestamp) so streaming and batch injection agree exactly.
/// Returns the sample unchanged for kinds that do not perturb features.
FeatureVector perturb_sample(const FeatureVector& x, const AttackScenario& s, VehicleId vehicle, std::uint64_t seed);

/// Applies `s` to a (possibly already attacked) stream of one vehicle.
/// Samples outside [start_ms, end_ms) or on non-targeted vehicles are left
/// untouched; perturbed samples receive the attack label.
/// Throws std::invalid_argument for invalid scenarios or when the scenario
/// time range does not intersect the stream.
LabeledStream inject_attack(LabeledStream stream, VehicleId vehicle, const AttackScenario& s, std::uint64_t seed);
LabeledStream inject_attack(const std::vector<FeatureVector>& stream, VehicleId vehicle, const AttackScenario& s,
                            std::uint64_t seed);

}  // namespace haven::sensors
