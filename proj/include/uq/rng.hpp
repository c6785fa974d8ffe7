#pragma once

#include "uq/stdnormal.hpp"
#include "uq/types.hpp"

#include <cstdint>

namespace uq {

// Counter-based pseudo-random stream: every value is a pure function of
// (seed, counter), so any partition of the index range over threads or
// batches reproduces the same numbers.
namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// 64-bit value at position `counter` of the stream identified by `seed`.
inline std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
  return mix64(seed + (counter + 1) * 0x9e3779b97f4a7c15ULL);
}

/// Uniform deviate in the open interval (0,1).
inline double uniform(std::uint64_t seed, std::uint64_t counter) {
  return (static_cast<double>(at(seed, counter) >> 11) + 0.5) * 0x1p-53;
}

/// Standard-normal deviate by inversion; reproducible across platforms.
inline double normal(std::uint64_t seed, std::uint64_t counter) {
  return norm_ppf(uniform(seed, counter));
}

/// Derive an independent stream seed from a parent seed and a label.
std::uint64_t derive(std::uint64_t seed, const char* tag);

}  // namespace rng

/// rows x cols matrix of standard-normal deviates; row r is the block of
/// counters [(row0+r)*cols, (row0+r+1)*cols).
Matrix normal_matrix(std::uint64_t seed, Index rows, Index cols, std::uint64_t row0 = 0);

/// Deterministic Fisher-Yates shuffle of 0..n-1 (independent of libstdc++
/// distribution internals).
std::vector<Index> shuffled_indices(Index n, std::uint64_t seed);

}  // namespace uq
