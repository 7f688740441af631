#pragma once

#include <vector>

#include "haven/chain/block.hpp"
#include "haven/chain/registry.hpp"
#include "haven/edge/training.hpp"
#include "haven/harness/config.hpp"
#include "haven/harness/metrics.hpp"
#include "haven/net/engine.hpp"
#include "haven/sensors/feature.hpp"

namespace haven::harness {

struct ScenarioResult {
  MetricsReport report;
  WallClockStats timing;
  std::vector<VerdictRecord> verdicts;
  std::vector<RoundRecord> rounds;
  std::vector<chain::Block> ledger;
  /// Every event offered to the selective-logging predicate, with its decision.
  std::vector<chain::ThreatEvent> offered_events;
  std::vector<bool> log_decisions;
  std::vector<chain::MitigationDirective> directives;
  std::vector<sensors::AttackScenario> attacks;
  std::vector<net::TraceRecord> trace;
};

/// Window-aligned random attack episodes plus the config's scheduled ones.
std::vector<sensors::AttackScenario> plan_attacks(const ScenarioConfig& cfg);

/// Tier-1 scorers trained on the seeded bootstrap corpus.
edge::TrainedDetector train_bootstrap(const ScenarioConfig& cfg);

/// Validates the config, trains the bootstrap detector and runs all tiers.
ScenarioResult run_scenario(const ScenarioConfig& cfg);
/// Same with an already trained detector (sweeps reuse one).
ScenarioResult run_scenario(const ScenarioConfig& cfg, const edge::TrainedDetector& detector);

}  // namespace haven::harness
