#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace mfg {

using Rng = std::mt19937_64;

// splitmix64, used to derive independent substreams from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1). Hand-rolled so streams are identical across
// standard library implementations (std distributions are not portable).
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).
inline int uniform_int(Rng& rng, int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

// Inverse-CDF draw from a probability vector. Mass beyond rounding error is
// assumed to sum to 1; the final positive entry absorbs any shortfall.
inline int sample_index(std::span<const double> probs, Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    int last_positive = -1;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_positive = i;
        if (u < acc) return i;
    }
    if (last_positive < 0) throw std::invalid_argument("sample_index: no positive mass");
    return last_positive;
}

}  // namespace mfg
