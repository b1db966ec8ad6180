#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <utility>

namespace gibbs {

// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the same
// (counter, key) always gives the same 128 bits, which is what lets every
// Fourier mode own an independent, reproducible stream.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

// Folds a tuple of integers into a 64-bit key with the splitmix64 finalizer.
std::uint64_t mix_key(std::initializer_list<std::uint64_t> parts);

// Two independent standard normals for (key, counter), via Box-Muller.
std::pair<double, double> gaussian_pair(std::uint64_t key, std::uint64_t counter = 0);

// Uniform in (0, 1).
double uniform01(std::uint64_t key, std::uint64_t counter);

}  // namespace gibbs
