#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "haven/chain/selective_log.hpp"

namespace haven::chain {

struct Block {
  std::uint64_t index = 0;
  Digest prev_hash{};
  Digest tx_digest{};
  std::vector<ThreatEvent> transactions;
  NodeId proposer_id = 0;
  SimTimeMs timestamp_ms = 0;
  Digest block_hash{};
};

Digest transaction_digest(const ThreatEvent& e);
/// SHA-256 over the concatenated transaction digests.
Digest transactions_root(std::span<const ThreatEvent> txs);
/// SHA-256(index || prev_hash || tx_digest || proposer || timestamp).
Digest compute_block_hash(const Block& b);

/// Takes up to batch_size events from the front of `pending` into a new
/// block chained to `prev` (nullptr for the genesis block).
/// Throws std::invalid_argument if pending is empty or batch_size is 0.
Block assemble_block(std::vector<ThreatEvent>& pending, const Block* prev, NodeId proposer, SimTimeMs now_ms,
                     std::size_t batch_size = 5);

/// Recomputes every transaction root, block hash and link.
bool verify_chain(std::span<const Block> chain);

/// Hex-encoded hashes; one block per line.
std::string block_to_json_line(const Block& b);
void export_ledger_jsonl(std::span<const Block> chain, std::ostream& os);

}  // namespace haven::chain
