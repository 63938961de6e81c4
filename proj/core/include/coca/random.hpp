#pragma once

#include <cstdint>
#include <vector>

namespace coca {

/// Counter-based 64-bit generator: the i-th output is the SplitMix64 finalizer
/// applied to seed + (i+1) * 0x9E3779B97F4A7C15. Streams are fully determined
/// by (seed, counter), so draws are reproducible across platforms.
///
/// Normals use the cosine branch of Box-Muller on two consecutive uniforms;
/// uniforms are (top 53 bits + 0.5) * 2^-53, i.e. strictly inside (0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  double uniform();
  double normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> permutation(std::size_t n, Rng& rng);

}  // namespace coca
