#pragma once

#include <cstdint>

namespace axrel::faults {

// Counter-based generator: the draw for (seed, stream, counter) does not depend
// on how many other draws were made, so plans are order- and thread-independent.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t draw(RngSpec rng, std::uint64_t counter) noexcept {
  const std::uint64_t key = splitmix64(rng.seed ^ splitmix64(rng.stream_id ^ 0x5851F42D4C957F2DULL));
  return splitmix64(key + counter * 0xD1B54A32D192ED03ULL);
}

// Uniform in [0, 1) with 53 random bits.
constexpr double draw_unit(RngSpec rng, std::uint64_t counter) noexcept {
  return static_cast<double>(draw(rng, counter) >> 11) * 0x1.0p-53;
}

}  // namespace axrel::faults
