#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "mfg/distribution.hpp"

namespace mfg {

// Master policies see the population histogram; vanilla ones do not.
enum class ObsEncoding { master, vanilla };

inline int observation_length(ObsEncoding enc, int horizon, int num_states) {
    const int base = horizon + 1 + num_states;
    return enc == ObsEncoding::master ? base + num_states : base;
}

/// Feature layout: [one-hot timestep (N_T+1) | one-hot state (|X|) | mu (|X|)],
/// with the mu block omitted for the vanilla encoding. Timesteps run through
/// N_T inclusive since terminal states appear in transitions.
inline void encode_observation(ObsEncoding enc, int n, int x, const Distribution& mu,
                               int horizon, std::span<double> out) {
    const int num_states = mu.size();
    if (n < 0 || n > horizon) throw std::invalid_argument("encode_observation: timestep out of range");
    if (x < 0 || x >= num_states) throw std::invalid_argument("encode_observation: state out of range");
    if (static_cast<int>(out.size()) != observation_length(enc, horizon, num_states))
        throw std::invalid_argument("encode_observation: bad output length");

    for (auto& v : out) v = 0.0;
    out[static_cast<std::size_t>(n)] = 1.0;
    out[static_cast<std::size_t>(horizon + 1 + x)] = 1.0;
    if (enc == ObsEncoding::master) {
        const std::size_t base = static_cast<std::size_t>(horizon + 1 + num_states);
        for (int i = 0; i < num_states; ++i) out[base + static_cast<std::size_t>(i)] = mu[i];
    }
}

inline std::vector<double> encode_observation(ObsEncoding enc, int n, int x,
                                              const Distribution& mu, int horizon) {
    std::vector<double> out(
        static_cast<std::size_t>(observation_length(enc, horizon, mu.size())));
    encode_observation(enc, n, x, mu, horizon, out);
    return out;
}

}  // namespace mfg
