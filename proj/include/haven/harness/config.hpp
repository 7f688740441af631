#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "haven/chain/pbft.hpp"
#include "haven/chain/selective_log.hpp"
#include "haven/edge/ensemble.hpp"
#include "haven/fed/aggregator.hpp"
#include "haven/net/engine.hpp"
#include "haven/sensors/feature.hpp"

namespace haven::harness {

/// An attack placed explicitly by the config, on top of the random plan.
struct ScheduledAttack {
  sensors::AttackKind kind = sensors::AttackKind::GpsSpoof;
  double intensity = 1.0;
  SimTimeMs start_ms = 0;
  SimTimeMs end_ms = 0;
  std::vector<VehicleId> targets;

  bool operator==(const ScheduledAttack&) const = default;
};

struct AttackPlanConfig {
  /// Share of vehicle-windows covered by randomly placed episodes.
  double window_fraction = 0.2;
  /// Kind -> share of episodes; must sum to 1.
  std::map<sensors::AttackKind, double> mix;
  double intensity_min = 0.3;
  double intensity_max = 1.0;
  std::size_t episode_min_windows = 3;
  std::size_t episode_max_windows = 6;
  std::vector<ScheduledAttack> scheduled;

  bool operator==(const AttackPlanConfig&) const = default;
};

struct FederatedConfig {
  double byzantine_ratio = 0.2;
  double byzantine_magnitude = 10.0;
  fed::AggregatorConfig aggregator{0.3, 0.5, 30.0, false, fed::AggregationRule::TrimmedMean};
  SimTimeMs collect_deadline_ms = 200;
  double quorum_fraction = 0.5;
  /// Most recent windows each vehicle keeps as local training data.
  std::size_t local_history_windows = 40;
};

struct ChainConfig {
  chain::FilterConfig filter;
  std::size_t validators = 7;
  std::size_t crashed_validators = 0;
  std::size_t byzantine_validators = 0;
  std::size_t batch_size = 5;
  SimTimeMs batch_timeout_ms = 2'000;
  SimTimeMs view_timeout_ms = 2'000;
  /// Repeat reports of one (vehicle, class) inside this span are folded into
  /// the previous incident.
  SimTimeMs incident_cooldown_ms = 1'000;
};

struct NetworkConfig {
  net::ChannelModel edge = net::ChannelModel::defaults(net::Tier::EdgeLocal);
  // 100 ms nominal; updates are expected well under the 200 ms bound.
  net::ChannelModel regional = net::ChannelModel::defaults(net::Tier::RegionalV2X);
  net::ChannelModel global = net::ChannelModel::defaults(net::Tier::GlobalWAN);
  double jam_loss_boost = 0.9;
  double jam_delay_ms = 50.0;
};

struct BootstrapConfig {
  std::size_t vehicles = 40;
  double duration_s = 20.0;
  double attack_fraction = 0.4;
};

struct ScenarioConfig {
  std::uint64_t seed = 42;
  std::size_t n_vehicles = 100;
  std::size_t n_regions = 4;
  double duration_s = 20.0;
  std::size_t window_length = 50;
  double glitch_rate_hz = 1.0;
  double glitch_scale_max = 0.4;
  AttackPlanConfig attacks;
  edge::DetectorConfig detector;
  FederatedConfig federated;
  fed::PrivacyConfig privacy;  // sensitivity is derived per region
  ChainConfig chain;
  NetworkConfig network;
  BootstrapConfig bootstrap;
  double tau_max_ms = 10.0;
  double alpha_min = 0.94;
  bool record_trace = false;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Equal share for every attack kind.
std::map<sensors::AttackKind, double> uniform_attack_mix();

/// The reference scenario: 100 vehicles, 4 regions, 20 s, 20% attacked
/// windows, federated rounds every 5 s.
ScenarioConfig reference_config();

/// Parse a JSON document. Missing keys keep their defaults; unknown keys,
/// wrong types and invalid values raise ConfigError.
ScenarioConfig config_from_json(const std::string& text);
ScenarioConfig load_config(const std::string& path);
/// Every field, pretty-printed.
std::string config_to_json(const ScenarioConfig& cfg);

}  // namespace haven::harness
