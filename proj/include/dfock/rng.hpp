#pragma once

#include <cstdint>
#include <random>

namespace dfock {

/// Named substreams of the master seed. Values are part of the on-disk
/// reproducibility contract; append, never renumber.
enum class Stream : std::uint64_t {
  Density = 1,
  RemezCoefficients = 2,
  RemezPoints = 3,
  AreaMonteCarlo = 4,
  TestFunctions = 5,
  SamplingSearch = 6,
  Kovrijkine = 7,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-mode seed derivation: the result depends only on its arguments,
/// so work items can be evaluated in any order.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t counter = 0) noexcept;

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t counter = 0) {
  return Rng(derive_seed(master, stream, counter));
}

/// Uniform double in [0,1) built from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace dfock
