#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace synteval {

using Rng = std::mt19937_64;

// splitmix64 finalizer; decorrelates sequential seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from (base, tag, index). Every
// operation that consumes randomness owns a stream keyed this way, so
// adding a consumer never perturbs the draws of another.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t index = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(base ^ mix64(h) ^ mix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

}  // namespace synteval
