#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace haven {

using VehicleId = std::uint32_t;
using RegionId = std::uint32_t;
using NodeId = std::uint32_t;

/// Simulated time in integer milliseconds.
using SimTimeMs = std::int64_t;

using Digest = std::array<std::uint8_t, 32>;

/// Raised for malformed scenario configuration; carries the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace haven
