#pragma once

#include <cstdint>
#include <cstring>
#include <random>

#include "lpf/geometry.hpp"

namespace lpf {

/// splitmix64 step; used to derive independent sub-streams from one seed.
inline std::uint64_t split_mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Named sub-streams so each consumer of randomness is decoupled from the
/// others; adding a draw in one place never shifts another's sequence.
enum class RngStream : std::uint64_t {
  kSeeding = 1,
  kFrames = 2,
  kDictionaryInit = 3,
  kPattern = 4,
  kSynth = 5,
};

inline std::mt19937_64 make_rng(std::uint64_t seed, RngStream stream) {
  return std::mt19937_64(split_mix64(seed ^ split_mix64(static_cast<std::uint64_t>(stream))));
}

inline std::uint64_t double_bits(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof(b));
  return b;
}

/// Deterministic per-position rng: the same point gets the same stream no
/// matter where it sits in the input order.
inline std::mt19937_64 make_position_rng(std::uint64_t seed, const Vec3& p, RngStream stream) {
  std::uint64_t h = split_mix64(seed ^ split_mix64(static_cast<std::uint64_t>(stream)));
  h = split_mix64(h ^ double_bits(p.x()));
  h = split_mix64(h ^ double_bits(p.y()));
  h = split_mix64(h ^ double_bits(p.z()));
  return std::mt19937_64(h);
}

/// Uniform rotation over SO(3) (Shoemake's quaternion method).
Mat3 random_rotation(std::mt19937_64& rng);

/// Uniform sample in the closed disk of the given radius, z = 0.
Vec3 random_in_disk(std::mt19937_64& rng, double radius);

} // namespace lpf
