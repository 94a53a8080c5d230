#pragma once

#include <cstdint>

namespace trajsfm {

// SplitMix64 finalizer; used to derive independent stream seeds.
inline uint64_t SplitMix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the stream keyed by (a, b) under a base seed.
inline uint64_t DeriveSeed(uint64_t seed, int a, int b) {
  return SplitMix(seed ^ SplitMix((static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
                                  static_cast<uint32_t>(b)));
}

}  // namespace trajsfm
