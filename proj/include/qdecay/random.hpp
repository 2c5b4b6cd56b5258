#pragma once

#include <cstdint>
#include <random>

namespace qdecay {

// Independent stream for one task of a seeded computation.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t task) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(task >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace qdecay
