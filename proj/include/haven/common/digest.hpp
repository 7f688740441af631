#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "haven/common/types.hpp"

namespace haven {

Digest sha256(std::span<const std::uint8_t> bytes);

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Throws std::invalid_argument on odd length or non-hex characters.
Digest digest_from_hex(std::string_view hex);

/// Canonical little-endian encoder used for every hashed structure.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v);
  ByteWriter& u32(std::uint32_t v);
  ByteWriter& u64(std::uint64_t v);
  ByteWriter& i64(std::int64_t v);
  /// Rounds to 6 decimals and writes the scaled integer, so the encoding
  /// does not depend on the last few bits of floating-point arithmetic.
  ByteWriter& fixed6(double v);
  ByteWriter& bytes(std::span<const std::uint8_t> b);

  const std::vector<std::uint8_t>& data() const { return buf_; }
  Digest digest() const { return sha256(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

}  // namespace haven
