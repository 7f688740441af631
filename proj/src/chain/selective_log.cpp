#include "haven/chain/selective_log.hpp"

#include <set>
#include <stdexcept>

namespace haven::chain {

void FilterConfig::validate() const {
  if (!(severity_threshold >= 0.0 && severity_threshold <= 1.0)) throw std::invalid_argument("filter: severity_threshold must lie in [0, 1]");
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) throw std::invalid_argument("filter: confidence_threshold must lie in [0, 1]");
  if (frequency_window_ms <= 0) throw std::invalid_argument("filter: frequency_window_ms must be > 0");
}

bool should_log(const ThreatEvent& e, const FilterConfig& cfg) {
  return e.severity > cfg.severity_threshold || e.cross_regional_frequency > cfg.frequency_threshold ||
         e.consensus_confidence > cfg.confidence_threshold;
}

void CrossRegionRegistry::evict(std::deque<std::pair<SimTimeMs, RegionId>>& q, SimTimeMs now_ms) const {
  while (!q.empty() && now_ms - q.front().first > window_ms_) q.pop_front();
}

std::uint32_t CrossRegionRegistry::track(const edge::ThreatSignature& sig, RegionId region, SimTimeMs now_ms) {
  auto& q = reports_[{sig.attack_class, sig.pattern_key}];
  q.emplace_back(now_ms, region);
  return frequency(sig, now_ms);
}

std::uint32_t CrossRegionRegistry::frequency(const edge::ThreatSignature& sig, SimTimeMs now_ms) {
  auto it = reports_.find({sig.attack_class, sig.pattern_key});
  if (it == reports_.end()) return 0;
  evict(it->second, now_ms);
  std::set<RegionId> regions;
  for (const auto& [t, r] : it->second) regions.insert(r);
  return static_cast<std::uint32_t>(regions.size());
}

std::uint32_t track_cross_regional(CrossRegionRegistry& registry, const edge::ThreatSignature& sig, RegionId region,
                                   SimTimeMs now_ms) {
  return registry.track(sig, region, now_ms);
}

double storage_stats(std::uint64_t total_events, std::uint64_t logged_events) {
  if (total_events == 0) throw std::invalid_argument("storage_stats: zero total events");
  if (logged_events > total_events) throw std::invalid_argument("storage_stats: logged exceeds total");
  return static_cast<double>(logged_events) / static_cast<double>(total_events);
}

}  // namespace haven::chain
