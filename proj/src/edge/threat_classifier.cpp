#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "haven/edge/threat.hpp"

namespace haven::edge {

std::string_view to_string(ThreatClass c) {
  if (c == ThreatClass::Unknown) return "Unknown";
  return sensors::to_string(static_cast<sensors::AttackKind>(c));
}

ThreatClass threat_class_from_string(std::string_view s) {
  if (s == "Unknown") return ThreatClass::Unknown;
  return to_threat_class(sensors::attack_kind_from_string(s));
}

ThreatClass to_threat_class(sensors::AttackKind k) { return static_cast<ThreatClass>(static_cast<std::uint8_t>(k)); }

ThreatClassifier ThreatClassifier::fit(std::span<const Summary> clean, Params params) {
  return ThreatClassifier(Standardizer::fit<Summary>(clean), params);
}

std::array<double, kFeatureGroupCount> ThreatClassifier::group_deviation(const Summary& s) const {
  if (baseline_.dim() != kSummaryDim) throw std::logic_error("ThreatClassifier: baseline not fitted");
  std::array<double, kFeatureGroupCount> sum{}, count{};
  for (std::size_t j = 0; j < kSummaryDim; ++j) {
    const auto g = static_cast<std::size_t>(group_of(j));
    sum[g] += std::abs(baseline_.apply(j, s[j]));
    count[g] += 1.0;
  }
  for (std::size_t g = 0; g < kFeatureGroupCount; ++g) sum[g] = count[g] > 0 ? sum[g] / count[g] : 0.0;
  return sum;
}

ThreatClass ThreatClassifier::classify(const Summary& s, double /*anomaly_score*/) const {
  const auto dev = group_deviation(s);
  // Heading/motion consistency reacts to both GPS and IMU tampering, so it
  // takes no part in attribution.
  constexpr std::pair<FeatureGroup, ThreatClass> kCandidates[] = {
      {FeatureGroup::Lidar, ThreatClass::LidarSpoof},
      {FeatureGroup::Camera, ThreatClass::CameraPatch},
      {FeatureGroup::Gps, ThreatClass::GpsSpoof},
      {FeatureGroup::Imu, ThreatClass::ImuManip},
      {FeatureGroup::Actuator, ThreatClass::ActuatorCompromise},
  };
  double best = -1.0, second = -1.0;
  ThreatClass best_class = ThreatClass::Unknown;
  for (const auto& [group, cls] : kCandidates) {
    const double d = dev[static_cast<std::size_t>(group)];
    if (d > best) {
      second = best;
      best = d;
      best_class = cls;
    } else if (d > second) {
      second = d;
    }
  }
  if (best < params_.min_deviation || best < params_.dominance_ratio * second) return ThreatClass::Unknown;
  return best_class;
}

ThreatClass ThreatClassifier::classify(const sensors::FeatureWindow& w, double anomaly_score) const {
  return classify(window_summary(w), anomaly_score);
}

}  // namespace haven::edge
