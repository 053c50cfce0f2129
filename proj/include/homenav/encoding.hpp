#pragma once

// Canonical byte layout shared by transaction and block hashing: fixed-width
// big-endian numbers, 4-byte length prefixes for strings and lists. The
// ledger's hashes are only comparable across processes if this layout never
// changes.

#include <cstdint>
#include <string>
#include <vector>

namespace homenav {

using ByteBuffer = std::vector<std::uint8_t>;

void put_u32(ByteBuffer& out, std::uint32_t v);
void put_u64(ByteBuffer& out, std::uint64_t v);
void put_i64(ByteBuffer& out, std::int64_t v);
void put_f64(ByteBuffer& out, double v);  // IEEE-754 binary64, big-endian
void put_string(ByteBuffer& out, const std::string& s);
void put_raw(ByteBuffer& out, const std::uint8_t* data, std::size_t n);

}  // namespace homenav
