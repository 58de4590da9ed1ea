#pragma once

#include <cstdint>
#include <random>

namespace schedsim {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the stream owned by replication `rep`. Results never depend on
/// which thread runs a replication.
inline constexpr std::uint64_t replication_seed(std::uint64_t base, std::uint64_t rep) {
  return splitmix64(base ^ splitmix64(rep));
}

/// Independent stream for the randomized schedule of replication `rep`, so a
/// replication's delay trace is the same whether or not RA takes part.
inline constexpr std::uint64_t schedule_seed(std::uint64_t base, std::uint64_t rep) {
  return replication_seed(base ^ 0x5ced5ced5ced5cedULL, rep);
}

/// Uniform double in the open interval (0, 1), built from the top 53 bits.
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace schedsim
