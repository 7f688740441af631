#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "haven/common/types.hpp"

namespace haven::harness {

/// One Tier-1 decision with its ground truth.
struct VerdictRecord {
  VehicleId vehicle_id = 0;
  RegionId region_id = 0;
  std::uint32_t window_index = 0;
  SimTimeMs window_start_ms = 0;
  bool truth = false;
  std::string truth_kind;  // empty when clean
  bool predicted = false;
  double anomaly_score = 0.0;
  double confidence = 0.0;
  std::string threat_level;
  std::string threat_class;  // empty unless predicted

  bool operator==(const VerdictRecord&) const = default;
};

struct Confusion {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

Confusion confusion_from(std::span<const VerdictRecord> verdicts);

struct Scores {
  double accuracy = 1.0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  /// False when nothing was predicted positive; precision is then reported as 1.
  bool precision_defined = true;
  /// False when there were no positives; recall is then reported as 1.
  bool recall_defined = true;
};

Scores scores_from(const Confusion& c);

/// Per-region coordinator round record.
struct RoundRecord {
  RegionId region_id = 0;
  std::uint64_t round = 0;
  SimTimeMs time_ms = 0;
  std::size_t expected = 0;
  std::size_t received = 0;
  std::size_t rejected = 0;
  std::size_t aggregated = 0;
  bool quorum_met = false;
  double mean_survivors = 0.0;
  double aggregate_norm = 0.0;
  double loss = 0.0;
  double budget_basic = 0.0;
  double budget_advanced = 0.0;

  bool operator==(const RoundRecord&) const = default;
};

/// Deterministic scenario outcome. Wall-clock measurements live in
/// WallClockStats so that two runs of one config compare byte-identical.
struct MetricsReport {
  std::uint64_t seed = 0;
  std::uint64_t n_vehicles = 0;
  std::uint64_t n_regions = 0;
  double duration_s = 0.0;

  std::uint64_t windows = 0;
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_defined = true;
  bool recall_defined = true;
  bool alpha_min_violated = false;
  double class_accuracy = 0.0;
  std::map<std::string, double> per_attack_detection_rate;

  std::vector<std::pair<std::uint64_t, double>> fl_convergence;
  std::uint64_t rounds_to_converge = 0;
  std::uint64_t fl_rounds = 0;
  double privacy_basic = 0.0;
  double privacy_advanced = 0.0;

  std::uint64_t incidents = 0;
  std::uint64_t total_events = 0;
  std::uint64_t logged_events = 0;
  double logged_fraction = 0.0;
  std::uint64_t blocks_mined = 0;
  std::uint64_t failed_consensus_rounds = 0;
  double mean_block_time_s = 0.0;
  std::uint64_t directives = 0;
  double throughput_threats_per_s_per_region = 0.0;

  std::uint64_t messages_sent = 0;
  std::uint64_t drop_count = 0;

  bool operator==(const MetricsReport&) const = default;
};

/// Fills the confusion-derived fields of `r`.
void apply_confusion(MetricsReport& r, const Confusion& c, double alpha_min);

struct WallClockStats {
  double latency_mean_ms = 0.0;
  double latency_median_ms = 0.0;
  double latency_p95_ms = 0.0;
  double latency_max_ms = 0.0;
  std::uint64_t tau_max_violations = 0;
  double mining_wall_ms_mean = 0.0;
  double run_wall_s = 0.0;
};

/// Nearest-rank percentile (p in [0, 100]) of an unsorted sample; 0 when empty.
double percentile(std::vector<double> values, double p);

/// First index whose value lies within `tolerance` (relative) of the last value.
std::uint64_t rounds_to_converge(std::span<const std::pair<std::uint64_t, double>> series, double tolerance = 0.05);

}  // namespace haven::harness
