#include "lcdsc/rng.hpp"

namespace lcdsc {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    return mix_seed(mix_seed(master) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

std::vector<double> gaussian_noise(std::size_t n, double sigma, std::uint64_t seed) {
    std::vector<double> out(n, 0.0);
    if (sigma == 0.0) return out;
    Engine engine(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    for (auto& v : out) v = normal(engine);
    return out;
}

}  // namespace lcdsc
