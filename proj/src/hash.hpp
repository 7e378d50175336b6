#pragma once

#include <bit>
#include <cstdint>

namespace superdir::detail {

inline std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t value) {
  // boost::hash_combine, widened to 64 bits
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::uint64_t hash_mix(std::uint64_t seed, double value) {
  return hash_mix(seed, std::bit_cast<std::uint64_t>(value));
}

}  // namespace superdir::detail
