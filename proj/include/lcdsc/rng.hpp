#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace lcdsc {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed for sub-stream `index` of `master`. Streams are a pure function of
/// (master, index), so results do not depend on which thread draws them.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

using Engine = std::mt19937_64;

/// n iid N(0, sigma^2) draws from the engine seeded with `seed`.
std::vector<double> gaussian_noise(std::size_t n, double sigma, std::uint64_t seed);

}  // namespace lcdsc
