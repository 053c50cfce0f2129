#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>

namespace homenav {

// 32-byte SHA-256 digest. Hex form is always lowercase, 64 characters.
struct Hash {
  std::array<std::uint8_t, 32> bytes{};

  static Hash zero() { return Hash{}; }
  bool is_zero() const;

  std::string hex() const;
  // Strict parse: exactly 64 lowercase hex characters, anything else throws
  // std::invalid_argument.
  static Hash from_hex(const std::string& text);

  auto operator<=>(const Hash&) const = default;
};

Hash sha256(std::span<const std::uint8_t> data);
Hash sha256(std::string_view text);

}  // namespace homenav
