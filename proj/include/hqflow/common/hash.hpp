#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hqflow {

/// FNV-1a 64-bit. Content fingerprint for spec snapshots and artifact
/// indexes; not cryptographic.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v);

}  // namespace hqflow
