#pragma once

#include <cstdint>
#include <random>

namespace eabandit {

using Rng = std::mt19937_64;

// Mixes (seed, stream, index) into a 64-bit seed with splitmix64 so that
// nearby inputs give unrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t index = 0) {
  return Rng(derive_seed(seed, stream, index));
}

// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Stream tags used by the experiment runner.
namespace streams {
inline constexpr std::uint64_t kSplit = 1;
inline constexpr std::uint64_t kFactorization = 2;
inline constexpr std::uint64_t kSyntheticCatalog = 3;
inline constexpr std::uint64_t kThetaStar = 4;
inline constexpr std::uint64_t kUserSession = 5;
inline constexpr std::uint64_t kGridPoint = 6;
}  // namespace streams

}  // namespace eabandit
