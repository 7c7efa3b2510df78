#pragma once

#include <cstdint>
#include <functional>

namespace explore {

/// Grid index of a leaf voxel at the finest tree depth. Indices are
/// non-negative and relative to the map origin (the low corner of the
/// map bounds).
struct VoxelKey {
  int32_t x = 0;
  int32_t y = 0;
  int32_t z = 0;

  friend bool operator==(const VoxelKey&, const VoxelKey&) = default;
};

/// Interleaves the low 21 bits of each index. Used to order keys for
/// deterministic dumps and snapshots.
inline uint64_t mortonCode(const VoxelKey& k) {
  auto spread = [](uint64_t v) {
    v &= 0x1fffff;
    v = (v | v << 32) & 0x1f00000000ffffULL;
    v = (v | v << 16) & 0x1f0000ff0000ffULL;
    v = (v | v << 8) & 0x100f00f00f00f00fULL;
    v = (v | v << 4) & 0x10c30c30c30c30c3ULL;
    v = (v | v << 2) & 0x1249249249249249ULL;
    return v;
  };
  return spread(static_cast<uint64_t>(k.x)) |
         spread(static_cast<uint64_t>(k.y)) << 1 |
         spread(static_cast<uint64_t>(k.z)) << 2;
}

struct VoxelKeyHash {
  size_t operator()(const VoxelKey& k) const {
    // splitmix64 over the packed 21-bit triple
    uint64_t v = (static_cast<uint64_t>(static_cast<uint32_t>(k.x)) & 0x1fffff) |
                 ((static_cast<uint64_t>(static_cast<uint32_t>(k.y)) & 0x1fffff) << 21) |
                 ((static_cast<uint64_t>(static_cast<uint32_t>(k.z)) & 0x1fffff) << 42);
    v += 0x9e3779b97f4a7c15ULL;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<size_t>(v ^ (v >> 31));
  }
};

}  // namespace explore
