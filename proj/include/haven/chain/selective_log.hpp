#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <utility>

#include "haven/edge/threat.hpp"

namespace haven::chain {

struct ThreatEvent {
  edge::ThreatSignature signature;
  double severity = 0.0;
  std::uint32_t cross_regional_frequency = 0;
  double consensus_confidence = 0.0;
  SimTimeMs observed_at_ms = 0;
};

struct FilterConfig {
  double severity_threshold = 0.85;
  std::uint32_t frequency_threshold = 3;
  double confidence_threshold = 0.9;
  SimTimeMs frequency_window_ms = 60'000;

  void validate() const;
};

/// severity > t_s OR frequency > t_f OR confidence > t_c, all strict.
bool should_log(const ThreatEvent& event, const FilterConfig& cfg);

/// Sliding-window count of distinct regions reporting the same pattern
/// (attack class + coarse pattern key).
class CrossRegionRegistry {
 public:
  explicit CrossRegionRegistry(SimTimeMs window_ms = 60'000) : window_ms_(window_ms) {}

  /// Records the report and returns the current distinct-region count.
  std::uint32_t track(const edge::ThreatSignature& sig, RegionId region, SimTimeMs now_ms);
  std::uint32_t frequency(const edge::ThreatSignature& sig, SimTimeMs now_ms);

 private:
  using Key = std::pair<edge::ThreatClass, std::array<std::uint8_t, 8>>;
  void evict(std::deque<std::pair<SimTimeMs, RegionId>>& q, SimTimeMs now_ms) const;

  SimTimeMs window_ms_;
  std::map<Key, std::deque<std::pair<SimTimeMs, RegionId>>> reports_;
};

std::uint32_t track_cross_regional(CrossRegionRegistry& registry, const edge::ThreatSignature& sig, RegionId region,
                                   SimTimeMs now_ms);

/// Logged fraction phi = logged / total. Throws for total == 0 or logged > total.
double storage_stats(std::uint64_t total_events, std::uint64_t logged_events);

}  // namespace haven::chain
