#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "haven/common/rng.hpp"
#include "haven/common/types.hpp"
#include "haven/net/engine.hpp"

namespace haven::chain {

enum class FaultMode : std::uint8_t { Honest, Crashed, Byzantine };
enum class Phase : std::uint8_t { Idle, PrePrepared, Prepared, Committed };

std::string_view to_string(FaultMode m);
std::string_view to_string(Phase p);

struct VoteLog {
  std::map<Digest, std::uint32_t> prepares;
  std::map<Digest, std::uint32_t> commits;
};

struct ValidatorState {
  NodeId node_id = 0;
  std::uint64_t view = 0;
  Phase phase = Phase::Idle;
  FaultMode fault_mode = FaultMode::Honest;
  /// Keyed by (view, sequence).
  std::map<std::pair<std::uint64_t, std::uint64_t>, VoteLog> message_log;
  std::optional<Digest> accepted;   // digest taken from the pre-prepare
  std::optional<Digest> committed;  // digest this node committed
};

std::vector<ValidatorState> make_validators(std::size_t n, std::size_t crashed = 0, std::size_t byzantine = 0);

/// f = floor((n - 1) / 3).
std::size_t max_faults(std::size_t n);
/// Matching votes needed to prepare or commit: n - f, which is 2f + 1 when
/// n = 3f + 1 and never less.
std::size_t quorum(std::size_t n);

struct ConsensusTiming {
  double t_prepare_ms = 0.0;
  double t_commit_ms = 0.0;
  double t_network_ms = 0.0;
  double t_consensus_ms = 0.0;
};

struct PbftConfig {
  net::ChannelModel channel = net::ChannelModel::defaults(net::Tier::GlobalWAN);
  SimTimeMs view_timeout_ms = 2'000;
  /// Rotate the proposer after each timed-out view, up to f + 1 views.
  bool view_change = true;
};

struct PbftOutcome {
  bool committed = false;
  Digest digest{};
  std::uint64_t view = 0;
  NodeId proposer = 0;
  ConsensusTiming timing;
  std::uint64_t messages = 0;
  std::uint64_t dropped = 0;
  /// (node, digest) for every honest validator that committed.
  std::vector<std::pair<NodeId, Digest>> honest_commits;
};

/// Pre-prepare, prepare and commit over a private engine. The proposer is
/// validators[view % n]. Crashed nodes are silent; Byzantine nodes send the
/// real digest to one half of their peers and a conflicting one to the other.
/// Throws std::invalid_argument for an empty validator set.
PbftOutcome pbft_round(std::vector<ValidatorState>& validators, const Digest& block_hash, std::uint64_t sequence,
                       Rng& rng, const PbftConfig& cfg = {});

}  // namespace haven::chain
