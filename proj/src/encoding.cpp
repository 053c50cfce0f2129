#include "homenav/encoding.hpp"

#include <bit>

namespace homenav {

void put_u32(ByteBuffer& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

void put_u64(ByteBuffer& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(std::uint8_t(v >> shift));
  }
}

void put_i64(ByteBuffer& out, std::int64_t v) {
  put_u64(out, std::uint64_t(v));
}

void put_f64(ByteBuffer& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_string(ByteBuffer& out, const std::string& s) {
  put_u32(out, std::uint32_t(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

void put_raw(ByteBuffer& out, const std::uint8_t* data, std::size_t n) {
  out.insert(out.end(), data, data + n);
}

}  // namespace homenav
