#pragma once

#include <cstdint>

// Counter-based random numbers. Every draw is a pure function of a key tuple,
// so parallel sweeps produce identical streams no matter how work is split.
// Keys are chained through a splitmix64-style finalizer; the per-realization
// sub-seeds used by experiments come from derive_seed(master, stream, index).

namespace ea::rng {

// avalanche finalizer, bijective on 64-bit words
std::uint64_t mix(std::uint64_t x) noexcept;

// combine a seed with up to three indices into one well-mixed word
std::uint64_t key(std::uint64_t seed, std::uint64_t a,
                  std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

// uniform double in [0, 1)
double uniform01(std::uint64_t seed, std::uint64_t a,
                 std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

// standard normal via Box-Muller on two keyed uniforms
double normal(std::uint64_t seed, std::uint64_t a,
              std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

// +1 or -1 with equal probability
int coin(std::uint64_t seed, std::uint64_t a,
         std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

// named sub-streams so distinct roles never collide on the same key
enum stream : std::uint64_t {
  stream_couplings        = 0x01,
  stream_couplings_prime  = 0x02,
  stream_perturbation     = 0x03,
  stream_layer_spins_a    = 0x04,
  stream_layer_spins_b    = 0x05,
  stream_layer_couplings  = 0x06,
  stream_selftest         = 0x07,
  stream_window           = 0x08,
  stream_misc             = 0x09,
};

// sub-seed for (master seed, role, realization index)
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) noexcept;

}
