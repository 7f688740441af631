#pragma once

#include <set>
#include <string>
#include <vector>

#include "haven/chain/block.hpp"

namespace haven::chain {

struct MitigationDirective {
  std::string action = "region_alert";
  RegionId region_id = 0;
  VehicleId vehicle_id = 0;
  edge::ThreatClass attack_class = edge::ThreatClass::Unknown;
  std::uint64_t block_index = 0;
  Digest tx_hash{};
};

/// Rule engine applied to committed blocks: every High-level transaction
/// raises a region-wide alert. Applying a block twice is a no-op.
class ThreatRegistry {
 public:
  std::vector<MitigationDirective> apply(const Block& committed);

  const std::vector<MitigationDirective>& directives() const { return history_; }
  std::size_t blocks_applied() const { return applied_.size(); }

 private:
  std::set<Digest> applied_;
  std::vector<MitigationDirective> history_;
};

std::vector<MitigationDirective> registry_apply(ThreatRegistry& registry, const Block& committed);

}  // namespace haven::chain
