#ifndef FAIRTAIL_RNG_HPP_
#define FAIRTAIL_RNG_HPP_

#include <cstdint>
#include <random>

namespace fairtail {

/// SplitMix64 finalizer. Fixed bit mix so derived seeds reproduce across
/// platforms and compilers.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic per-stream sub-seed (stream = user index, algorithm slot,
/// ...). Independent of any parallel schedule.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(master ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) built directly from engine bits; avoids the
/// implementation-defined std::uniform_real_distribution.
inline double uniform_unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Uniform double strictly inside (0, 1).
inline double uniform_open_unit(std::mt19937_64& engine) {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

/// Unbiased integer in [0, bound) via Lemire's multiply-shift rejection.
inline std::uint64_t bounded_rand(std::mt19937_64& engine, std::uint64_t bound) {
  unsigned __int128 product = static_cast<unsigned __int128>(engine()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    std::uint64_t threshold = (0ULL - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(engine()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace fairtail

#endif  // FAIRTAIL_RNG_HPP_
