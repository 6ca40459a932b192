#ifndef BINVERSE_RNG_HPP
#define BINVERSE_RNG_HPP

#include <cstdint>

// Counter-based random number generation.
//
// Every variate is a pure function of (seed, stream, key1, key2), with no
// generator state. This buys three things the samplers rely on:
//   * nested truncation: a Fourier mode's draw depends on its wavevector
//     only, so refining the grid reproduces coarse-mode draws exactly;
//   * trivial checkpointing: a chain's randomness is (seed, step index);
//   * bit-reproducibility across platforms (no library distributions).
// The mixer is the splitmix64 finalizer.

namespace binverse::rng {

constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct GaussianPair {
  double z1;
  double z2;
};

// Two independent N(0,1) variates for the key chain (seed, stream, k1, k2).
GaussianPair gaussian_pair(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t k1, std::uint64_t k2);

double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t k1,
                std::uint64_t k2);

// Uniform variate in [0,1) on the same key chain.
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t k1,
               std::uint64_t k2);

}  // namespace binverse::rng

#endif
