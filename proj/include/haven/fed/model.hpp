#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "haven/common/types.hpp"

namespace haven::fed {

struct GlobalModel {
  std::vector<double> weights;
  std::uint64_t round = 0;
};

/// A client's gradient-difference vector g_k = w_k^(t+1) - w^(t).
struct ClientUpdate {
  VehicleId vehicle_id = 0;
  std::vector<double> delta;
  std::size_t sample_count = 1;
  std::uint64_t round = 0;
};

bool all_finite(std::span<const double> v);
double l2_norm(std::span<const double> v);

}  // namespace haven::fed
