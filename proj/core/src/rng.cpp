#include "ealab/rng.hpp"

#include <cmath>
#include <numbers>

namespace ea::rng {

std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t key(std::uint64_t seed, std::uint64_t a,
                  std::uint64_t b, std::uint64_t c) noexcept {
  std::uint64_t h = mix(seed);
  h = mix(h ^ a);
  h = mix(h ^ b);
  h = mix(h ^ c);
  return h;
}

double uniform01(std::uint64_t seed, std::uint64_t a,
                 std::uint64_t b, std::uint64_t c) noexcept {
  // top 53 bits -> [0,1)
  return double(key(seed, a, b, c) >> 11) * 0x1.0p-53;
}

double normal(std::uint64_t seed, std::uint64_t a,
              std::uint64_t b, std::uint64_t c) noexcept {
  const std::uint64_t k = key(seed, a, b, c);
  const double u1 = 1.0 - double(mix(k ^ 0x5bf0a8b1u) >> 11) * 0x1.0p-53;  // (0,1]
  const double u2 = double(mix(k ^ 0xc2b2ae35u) >> 11) * 0x1.0p-53;        // [0,1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int coin(std::uint64_t seed, std::uint64_t a,
         std::uint64_t b, std::uint64_t c) noexcept {
  return (key(seed, a, b, c) & 1ull) ? 1 : -1;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) noexcept {
  return key(master, stream, index, 0x9d2c5680ull);
}

}
