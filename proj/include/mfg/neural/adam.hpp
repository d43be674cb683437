#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "mfg/neural/mlp.hpp"

namespace mfg::neural {

struct AdamConfig {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamConfig config;
    std::int64_t step = 0;
    MlpGradients m;  // first moments, shaped like the parameters
    MlpGradients v;  // second moments

    static AdamState init(const MlpParams& params, AdamConfig config = {}) {
        AdamState s;
        s.config = config;
        s.m = MlpGradients::like(params);
        s.v = MlpGradients::like(params);
        return s;
    }
};

// Standard bias-corrected Adam update, in place.
inline void adam_step(MlpParams& params, const MlpGradients& grads, AdamState& state) {
    if (grads.weights.size() != params.weights.size())
        throw std::invalid_argument("adam_step: gradient shape mismatch");
    state.step += 1;
    const double b1 = state.config.beta1;
    const double b2 = state.config.beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    const double lr = state.config.learning_rate;
    const double eps = state.config.epsilon;

    auto update = [&](std::vector<double>& p, const std::vector<double>& g,
                      std::vector<double>& m, std::vector<double>& v) {
        if (g.size() != p.size()) throw std::invalid_argument("adam_step: size mismatch");
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            const double mhat = m[i] / corr1;
            const double vhat = v[i] / corr2;
            p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    };
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        update(params.weights[l], grads.weights[l], state.m.weights[l], state.v.weights[l]);
        update(params.biases[l], grads.biases[l], state.m.biases[l], state.v.biases[l]);
    }
}

}  // namespace mfg::neural
