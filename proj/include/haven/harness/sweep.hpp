#pragma once

#include <cstddef>
#include <vector>

#include "haven/harness/config.hpp"
#include "haven/harness/metrics.hpp"

namespace haven::harness {

struct SweepSpec {
  std::vector<std::size_t> vehicle_counts{100, 250, 500, 1000};
  std::size_t repetitions = 1;
  ScenarioConfig base = reference_config();
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  /// Throws ConfigError for empty or non-ascending counts or zero repetitions.
  void validate() const;
};

struct SweepRun {
  std::size_t vehicles = 0;
  std::size_t repetition = 0;
  MetricsReport report;
  WallClockStats timing;
};

struct TrendSummary {
  /// Tier-1 mean wall-clock latency per count (averaged over repetitions).
  std::vector<double> latency_mean_ms;
  std::vector<double> throughput;
  std::vector<double> accuracy;
  bool latency_below_tau = true;
  bool throughput_non_decreasing = true;
  /// Accuracy at the largest count minus accuracy at the smallest.
  double accuracy_change = 0.0;
};

struct SweepResult {
  std::vector<SweepRun> runs;  // ordered by (count, repetition)
  TrendSummary trend;
};

/// Repetition r of every count uses seed base.seed + r. One bootstrap
/// detector per repetition is trained once and shared across counts.
SweepResult run_sweep(const SweepSpec& spec);

TrendSummary summarize_trend(const std::vector<SweepRun>& runs, const std::vector<std::size_t>& counts, double tau_max_ms);

}  // namespace haven::harness
