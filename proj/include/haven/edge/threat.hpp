#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "haven/edge/ensemble.hpp"
#include "haven/edge/window_features.hpp"
#include "haven/sensors/feature.hpp"

namespace haven::edge {

/// Attack class attached to an escalated threat; Unknown when no single
/// feature group dominates.
enum class ThreatClass : std::uint8_t {
  GpsSpoof = 0,
  LidarSpoof = 1,
  CameraPatch = 2,
  ImuManip = 3,
  CommJam = 4,
  MlPoison = 5,
  ActuatorCompromise = 6,
  Unknown = 255,
};

std::string_view to_string(ThreatClass c);
ThreatClass threat_class_from_string(std::string_view s);
ThreatClass to_threat_class(sensors::AttackKind k);

/// Classifies an anomalous window by the feature group that deviates most
/// from a clean baseline (mean |z| over the group's summary features).
class ThreatClassifier {
 public:
  struct Params {
    double dominance_ratio = 1.5;  // top group / runner-up
    double min_deviation = 3.0;    // top group mean |z|
  };

  ThreatClassifier() = default;
  ThreatClassifier(Standardizer baseline, Params params) : baseline_(std::move(baseline)), params_(params) {}

  /// Fits the baseline on clean window summaries.
  static ThreatClassifier fit(std::span<const Summary> clean, Params params);
  static ThreatClassifier fit(std::span<const Summary> clean) { return fit(clean, Params{}); }

  /// Mean |z| per FeatureGroup.
  std::array<double, kFeatureGroupCount> group_deviation(const Summary& s) const;

  /// The anomaly score does not influence the class; it is accepted to keep
  /// the detector's call shape.
  ThreatClass classify(const Summary& s, double anomaly_score) const;
  ThreatClass classify(const sensors::FeatureWindow& w, double anomaly_score) const;

 private:
  Standardizer baseline_;
  Params params_;
};

struct ThreatSignature {
  Digest digest{};
  /// Coarse cross-region matching key: leading 8 bytes of a hash over the
  /// attack class and quantized severity only.
  std::array<std::uint8_t, 8> pattern_key{};
  double severity = 0.0;
  ThreatClass attack_class = ThreatClass::Unknown;
  ThreatLevel threat_level = ThreatLevel::Low;
  VehicleId vehicle_id = 0;
  RegionId region_id = 0;
  SimTimeMs timestamp_ms = 0;
};

/// Canonical encoding hashed into the digest: summary (each value rounded to
/// 6 decimals, little-endian i64), threat level byte, vehicle id (LE u32),
/// timestamp (LE i64).
std::vector<std::uint8_t> signature_preimage(const Summary& summary, ThreatLevel level, VehicleId vehicle,
                                             SimTimeMs timestamp_ms);

std::array<std::uint8_t, 8> pattern_key_for(ThreatClass cls, double severity);

ThreatSignature make_signature(const sensors::FeatureWindow& window, ThreatLevel level, VehicleId vehicle,
                               SimTimeMs timestamp_ms, ThreatClass cls = ThreatClass::Unknown, double severity = 0.0,
                               RegionId region = 0);
ThreatSignature make_signature(const Summary& summary, ThreatLevel level, VehicleId vehicle, SimTimeMs timestamp_ms,
                               ThreatClass cls, double severity, RegionId region);

}  // namespace haven::edge
