#include "uq/rng.hpp"

#include <vector>

namespace uq {
namespace rng {

std::uint64_t derive(std::uint64_t seed, const char* tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (const char* c = tag; *c; ++c) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*c));
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

}  // namespace rng

Matrix normal_matrix(std::uint64_t seed, Index rows, Index cols, std::uint64_t row0) {
  Matrix out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const std::uint64_t base = (row0 + static_cast<std::uint64_t>(r)) * static_cast<std::uint64_t>(cols);
    for (Index c = 0; c < cols; ++c)
      out(r, c) = rng::normal(seed, base + static_cast<std::uint64_t>(c));
  }
  return out;
}

std::vector<Index> shuffled_indices(Index n, std::uint64_t seed) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i) {
    const std::uint64_t r = rng::at(seed, static_cast<std::uint64_t>(i));
    const Index j = static_cast<Index>(r % static_cast<std::uint64_t>(i + 1));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  return idx;
}

}  // namespace uq
