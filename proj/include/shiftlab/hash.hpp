#pragma once

#include <cstdint>
#include <string>

namespace shiftlab {

// FNV-1a 64-bit. Integrity fingerprint for configs and checkpoints; not a
// cryptographic hash.
inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::string fnv1a64_hex(const std::string& text) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(text);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace shiftlab
