#include "haven/chain/block.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "haven/common/digest.hpp"

namespace haven::chain {

Digest transaction_digest(const ThreatEvent& e) {
  const auto& s = e.signature;
  ByteWriter w;
  w.bytes(s.digest)
      .bytes(s.pattern_key)
      .fixed6(s.severity)
      .u8(static_cast<std::uint8_t>(s.attack_class))
      .u8(static_cast<std::uint8_t>(s.threat_level))
      .u32(s.vehicle_id)
      .u32(s.region_id)
      .i64(s.timestamp_ms)
      .fixed6(e.severity)
      .u32(e.cross_regional_frequency)
      .fixed6(e.consensus_confidence)
      .i64(e.observed_at_ms);
  return w.digest();
}

Digest transactions_root(std::span<const ThreatEvent> txs) {
  ByteWriter w;
  for (const auto& t : txs) w.bytes(transaction_digest(t));
  return w.digest();
}

Digest compute_block_hash(const Block& b) {
  ByteWriter w;
  w.u64(b.index).bytes(b.prev_hash).bytes(b.tx_digest).u32(b.proposer_id).i64(b.timestamp_ms);
  return w.digest();
}

Block assemble_block(std::vector<ThreatEvent>& pending, const Block* prev, NodeId proposer, SimTimeMs now_ms,
                     std::size_t batch_size) {
  if (pending.empty()) throw std::invalid_argument("assemble_block: no pending events");
  if (batch_size == 0) throw std::invalid_argument("assemble_block: batch_size must be > 0");
  const auto take = std::min(batch_size, pending.size());
  Block b;
  b.index = prev ? prev->index + 1 : 0;
  if (prev) b.prev_hash = prev->block_hash;
  b.transactions.assign(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(take));
  pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(take));
  b.tx_digest = transactions_root(b.transactions);
  b.proposer_id = proposer;
  b.timestamp_ms = now_ms;
  b.block_hash = compute_block_hash(b);
  return b;
}

bool verify_chain(std::span<const Block> chain) {
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& b = chain[i];
    if (b.index != (i == 0 ? chain.front().index : chain[i - 1].index + 1)) return false;
    const Digest expected_prev = i == 0 ? Digest{} : chain[i - 1].block_hash;
    if (b.prev_hash != expected_prev) return false;
    if (b.tx_digest != transactions_root(b.transactions)) return false;
    if (b.block_hash != compute_block_hash(b)) return false;
  }
  return true;
}

std::string block_to_json_line(const Block& b) {
  nlohmann::ordered_json txs = nlohmann::ordered_json::array();
  for (const auto& t : b.transactions) {
    const auto& s = t.signature;
    txs.push_back({{"tx_hash", to_hex(transaction_digest(t))},
                   {"signature_digest", to_hex(s.digest)},
                   {"pattern_key", to_hex(s.pattern_key)},
                   {"attack_class", std::string(edge::to_string(s.attack_class))},
                   {"threat_level", std::string(edge::to_string(s.threat_level))},
                   {"vehicle_id", s.vehicle_id},
                   {"region_id", s.region_id},
                   {"timestamp_ms", s.timestamp_ms},
                   {"severity", t.severity},
                   {"cross_regional_frequency", t.cross_regional_frequency},
                   {"consensus_confidence", t.consensus_confidence},
                   {"observed_at_ms", t.observed_at_ms}});
  }
  nlohmann::ordered_json j{{"index", b.index},
                           {"prev_hash", to_hex(b.prev_hash)},
                           {"tx_digest", to_hex(b.tx_digest)},
                           {"proposer_id", b.proposer_id},
                           {"timestamp_ms", b.timestamp_ms},
                           {"block_hash", to_hex(b.block_hash)},
                           {"transactions", std::move(txs)}};
  return j.dump();
}

void export_ledger_jsonl(std::span<const Block> chain, std::ostream& os) {
  for (const auto& b : chain) os << block_to_json_line(b) << '\n';
}

}  // namespace haven::chain
