#include <algorithm>
#include <cmath>

#include "haven/common/digest.hpp"
#include "haven/edge/threat.hpp"

namespace haven::edge {

std::vector<std::uint8_t> signature_preimage(const Summary& summary, ThreatLevel level, VehicleId vehicle,
                                             SimTimeMs timestamp_ms) {
  ByteWriter w;
  for (double v : summary) w.fixed6(v);
  w.u8(static_cast<std::uint8_t>(level)).u32(vehicle).i64(timestamp_ms);
  return w.data();
}

std::array<std::uint8_t, 8> pattern_key_for(ThreatClass cls, double severity) {
  ByteWriter w;
  const auto bucket = static_cast<std::uint32_t>(std::floor(std::clamp(severity, 0.0, 1.0) * 20.0));
  w.u8(static_cast<std::uint8_t>(cls)).u32(bucket);
  const auto d = w.digest();
  std::array<std::uint8_t, 8> key{};
  std::copy_n(d.begin(), key.size(), key.begin());
  return key;
}

ThreatSignature make_signature(const Summary& summary, ThreatLevel level, VehicleId vehicle, SimTimeMs timestamp_ms,
                               ThreatClass cls, double severity, RegionId region) {
  ThreatSignature s;
  s.digest = sha256(signature_preimage(summary, level, vehicle, timestamp_ms));
  s.pattern_key = pattern_key_for(cls, severity);
  s.severity = severity;
  s.attack_class = cls;
  s.threat_level = level;
  s.vehicle_id = vehicle;
  s.region_id = region;
  s.timestamp_ms = timestamp_ms;
  return s;
}

ThreatSignature make_signature(const sensors::FeatureWindow& window, ThreatLevel level, VehicleId vehicle,
                               SimTimeMs timestamp_ms, ThreatClass cls, double severity, RegionId region) {
  return make_signature(window_summary(window), level, vehicle, timestamp_ms, cls, severity, region);
}

}  // namespace haven::edge
