#pragma once

#include <cstdint>

namespace grover_ising {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Counter-based seed splitting: the seed of task `index` in stream `stream`
/// depends only on (master, stream, index), so appending tasks never shifts
/// the seeds of earlier ones.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

// Stream tags used across the library.
enum class SeedStream : std::uint64_t {
  instance = 1,
  sigma_sampling = 2,
  measurement = 3,
  synthetic_spectrum = 4,
  feedback = 5,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, SeedStream stream,
                                    std::uint64_t index) {
  return derive_seed(master, static_cast<std::uint64_t>(stream), index);
}

}  // namespace grover_ising
