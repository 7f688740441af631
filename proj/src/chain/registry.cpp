#include "haven/chain/registry.hpp"

namespace haven::chain {

std::vector<MitigationDirective> ThreatRegistry::apply(const Block& committed) {
  std::vector<MitigationDirective> out;
  if (!applied_.insert(committed.block_hash).second) return out;
  for (const auto& tx : committed.transactions) {
    if (tx.signature.threat_level != edge::ThreatLevel::High) continue;
    MitigationDirective d;
    d.region_id = tx.signature.region_id;
    d.vehicle_id = tx.signature.vehicle_id;
    d.attack_class = tx.signature.attack_class;
    d.block_index = committed.index;
    d.tx_hash = transaction_digest(tx);
    out.push_back(d);
  }
  history_.insert(history_.end(), out.begin(), out.end());
  return out;
}

std::vector<MitigationDirective> registry_apply(ThreatRegistry& registry, const Block& committed) {
  return registry.apply(committed);
}

}  // namespace haven::chain
