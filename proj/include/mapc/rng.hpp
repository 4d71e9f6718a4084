#pragma once

#include <cstdint>
#include <random>

namespace mapc {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds from one
// episode seed so that adding a consumer never shifts another's draws.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix_seed(mix_seed(base) ^ mix_seed(stream + 0x5851F42D4C957F2DULL));
}

inline Rng make_rng(std::uint64_t base, std::uint64_t stream) {
  return Rng(derive_seed(base, stream));
}

// Stream identifiers; stable across releases so seeds stay replayable.
namespace stream {
inline constexpr std::uint64_t kDeployment = 1;
inline constexpr std::uint64_t kChannel = 2;
inline constexpr std::uint64_t kTrafficProfile = 3;
inline constexpr std::uint64_t kEngine = 4;
inline constexpr std::uint64_t kContention = 5;
inline constexpr std::uint64_t kDelivery = 6;
inline constexpr std::uint64_t kArrivalsBase = 1000;
}  // namespace stream

}  // namespace mapc
