//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_HASH_H_
#define SOLVO_HASH_H_

#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>

namespace solvo {
// 64-bit FNV-1a. Multi-byte integers are fed in little-endian order so the
// digest does not depend on the host byte order.
class Fnv1a {
public:
  static constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

  void add_byte(std::uint8_t b) {
    state_ ^= b;
    state_ *= kPrime;
  }

  void add_bytes(std::span<const std::uint8_t> bytes) {
    for (auto b: bytes)
      add_byte(b);
  }

  void add_string(std::string_view s) {
    for (char c: s)
      add_byte(static_cast<std::uint8_t>(c));
  }

  void add_u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
      add_byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void add_i32(std::int32_t v) { add_u32(static_cast<std::uint32_t>(v)); }

  void add_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
      add_byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::uint64_t digest() const { return state_; }

private:
  std::uint64_t state_ = kOffsetBasis;
};

inline std::uint64_t fnv1a(std::string_view s) {
  Fnv1a h;
  h.add_string(s);
  return h.digest();
}
}  // namespace solvo

#endif  // SOLVO_HASH_H_
