#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

namespace termtk {

struct Hash128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  bool operator==(const Hash128&) const = default;
};

struct Hash128Hasher {
  std::size_t operator()(const Hash128& h) const {
    return static_cast<std::size_t>(h.hi ^ (h.lo * 0x9E3779B97F4A7C15ULL));
  }
};

/// MurmurHash3 x64 128-bit (public domain, Austin Appleby).
Hash128 murmur3_128(std::string_view data, std::uint64_t seed = 0);

}  // namespace termtk
