#pragma once

#include <cstdint>
#include <random>

namespace cylfbm::rng {

// splitmix64 step; used to derive well-separated stream seeds.
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic engine for stream `stream` of the experiment seeded by `seed`.
// Streams are disjoint by construction.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t stream_index,
                              std::uint64_t substream = 0) {
  std::uint64_t s = mix(seed ^ 0x5bf03635d3a1e2c4ULL);
  s = mix(s ^ stream_index);
  s = mix(s ^ (substream * 0xda3e39cb94b95bdbULL + 1));
  return std::mt19937_64(s);
}

// Derived seed for the k-th noise component of a multi-component model.
inline std::uint64_t component_seed(std::uint64_t seed, std::uint64_t k) {
  return mix(mix(seed ^ 0xa5a5a5a5deadbeefULL) + k);
}

} // namespace cylfbm::rng
