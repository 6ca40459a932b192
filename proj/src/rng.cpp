#include "binverse/rng.hpp"

#include <cmath>

namespace binverse::rng {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Chain the key words through the mixer and emit two 64-bit outputs.
inline void outputs(std::uint64_t seed, std::uint64_t stream, std::uint64_t k1,
                    std::uint64_t k2, std::uint64_t& o1, std::uint64_t& o2) {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ mix64(stream));
  s = mix64(s ^ mix64(k1));
  s = mix64(s ^ mix64(k2));
  o1 = mix64(s);
  o2 = mix64(s ^ 0xDEADBEEF12345678ULL);
}

}  // namespace

GaussianPair gaussian_pair(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t k1, std::uint64_t k2) {
  std::uint64_t o1, o2;
  outputs(seed, stream, k1, k2, o1, o2);
  // 53-bit mantissas; u1 in (0,1] so the log is finite.
  const double u1 = static_cast<double>((o1 >> 11) + 1) * 0x1p-53;
  const double u2 = static_cast<double>(o2 >> 11) * 0x1p-53;
  const double rad = std::sqrt(-2.0 * std::log(u1));
  return {rad * std::cos(kTwoPi * u2), rad * std::sin(kTwoPi * u2)};
}

double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t k1,
                std::uint64_t k2) {
  return gaussian_pair(seed, stream, k1, k2).z1;
}

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t k1,
               std::uint64_t k2) {
  std::uint64_t o1, o2;
  outputs(seed, stream, k1, k2, o1, o2);
  (void)o2;
  return static_cast<double>(o1 >> 11) * 0x1p-53;
}

}  // namespace binverse::rng
