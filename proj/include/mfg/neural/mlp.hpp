#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfg/rng.hpp"

namespace mfg::neural {

/// Fully connected ReLU network with an identity output layer. Weights are
/// row-major (out x in) per layer. Plain value type; copies are snapshots.
struct MlpParams {
    std::vector<int> dims;  // input, hidden..., output
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    static MlpParams zeros(std::vector<int> layer_dims) {
        if (layer_dims.size() < 2) throw std::invalid_argument("MlpParams: need >= 2 dims");
        for (int d : layer_dims)
            if (d <= 0) throw std::invalid_argument("MlpParams: non-positive dim");
        MlpParams p;
        p.dims = std::move(layer_dims);
        for (std::size_t l = 0; l + 1 < p.dims.size(); ++l) {
            p.weights.emplace_back(
                static_cast<std::size_t>(p.dims[l]) * p.dims[l + 1], 0.0);
            p.biases.emplace_back(static_cast<std::size_t>(p.dims[l + 1]), 0.0);
        }
        return p;
    }

    // He-uniform fan-in init on weights, zero biases.
    static MlpParams he_uniform(std::vector<int> layer_dims, Rng& rng) {
        MlpParams p = zeros(std::move(layer_dims));
        for (std::size_t l = 0; l < p.weights.size(); ++l) {
            const double limit = std::sqrt(6.0 / p.dims[l]);
            for (double& w : p.weights[l]) w = (2.0 * uniform01(rng) - 1.0) * limit;
        }
        return p;
    }

    int num_layers() const { return static_cast<int>(weights.size()); }
    int input_dim() const { return dims.front(); }
    int output_dim() const { return dims.back(); }

    std::int64_t parameter_count() const {
        std::int64_t count = 0;
        for (const auto& w : weights) count += static_cast<std::int64_t>(w.size());
        for (const auto& b : biases) count += static_cast<std::int64_t>(b.size());
        return count;
    }

    bool same_shape(const MlpParams& other) const { return dims == other.dims; }
};

/// Copy of the online parameters for use as a frozen target.
inline MlpParams hard_target_sync(const MlpParams& online) { return online; }

inline void mlp_forward(const MlpParams& params, std::span<const double> obs,
                        std::span<double> out) {
    if (static_cast<int>(obs.size()) != params.input_dim())
        throw std::invalid_argument("mlp_forward: input dim mismatch");
    if (static_cast<int>(out.size()) != params.output_dim())
        throw std::invalid_argument("mlp_forward: output dim mismatch");

    std::vector<double> cur(obs.begin(), obs.end());
    std::vector<double> next;
    for (int l = 0; l < params.num_layers(); ++l) {
        const int in_dim = params.dims[static_cast<std::size_t>(l)];
        const int out_dim = params.dims[static_cast<std::size_t>(l) + 1];
        const auto& w = params.weights[static_cast<std::size_t>(l)];
        const auto& b = params.biases[static_cast<std::size_t>(l)];
        next.assign(static_cast<std::size_t>(out_dim), 0.0);
        for (int j = 0; j < out_dim; ++j) {
            const double* wrow = w.data() + static_cast<std::size_t>(j) * in_dim;
            double acc = b[static_cast<std::size_t>(j)];
            for (int i = 0; i < in_dim; ++i) acc += wrow[i] * cur[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(j)] = acc;
        }
        if (l + 1 < params.num_layers())
            for (double& v : next) v = v > 0.0 ? v : 0.0;
        cur.swap(next);
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cur[i];
}

inline std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> obs) {
    std::vector<double> out(static_cast<std::size_t>(params.output_dim()));
    mlp_forward(params, obs, out);
    return out;
}

struct MlpGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    static MlpGradients like(const MlpParams& params) {
        MlpGradients g;
        for (const auto& w : params.weights) g.weights.emplace_back(w.size(), 0.0);
        for (const auto& b : params.biases) g.biases.emplace_back(b.size(), 0.0);
        return g;
    }

    void zero() {
        for (auto& w : weights)
            for (double& v : w) v = 0.0;
        for (auto& b : biases)
            for (double& v : b) v = 0.0;
    }
};

/// Gradient of the mean squared error between the q-value at each taken
/// action and its (constant) target, over the batch. ReLU backprop uses
/// subgradient 0 at 0. Returns the loss.
inline double mlp_backward(const MlpParams& params,
                           const std::vector<std::span<const double>>& obs,
                           const std::vector<int>& actions,
                           const std::vector<double>& targets, MlpGradients& grads) {
    const std::size_t batch = obs.size();
    if (batch == 0) throw std::invalid_argument("mlp_backward: empty batch");
    if (actions.size() != batch || targets.size() != batch)
        throw std::invalid_argument("mlp_backward: batch size mismatch");
    const int layers = params.num_layers();
    grads.zero();

    // Per-layer activations for one sample; preacts[l] is the input to layer l.
    std::vector<std::vector<double>> acts(static_cast<std::size_t>(layers) + 1);
    std::vector<std::vector<double>> delta(static_cast<std::size_t>(layers) + 1);
    double loss = 0.0;
    const double inv_batch = 1.0 / static_cast<double>(batch);

    for (std::size_t s = 0; s < batch; ++s) {
        if (static_cast<int>(obs[s].size()) != params.input_dim())
            throw std::invalid_argument("mlp_backward: input dim mismatch");
        const int action = actions[s];
        if (action < 0 || action >= params.output_dim())
            throw std::invalid_argument("mlp_backward: action out of range");
        if (!std::isfinite(targets[s]))
            throw std::invalid_argument("mlp_backward: non-finite target");

        acts[0].assign(obs[s].begin(), obs[s].end());
        for (int l = 0; l < layers; ++l) {
            const int in_dim = params.dims[static_cast<std::size_t>(l)];
            const int out_dim = params.dims[static_cast<std::size_t>(l) + 1];
            const auto& w = params.weights[static_cast<std::size_t>(l)];
            const auto& b = params.biases[static_cast<std::size_t>(l)];
            auto& out = acts[static_cast<std::size_t>(l) + 1];
            out.assign(static_cast<std::size_t>(out_dim), 0.0);
            for (int j = 0; j < out_dim; ++j) {
                const double* wrow = w.data() + static_cast<std::size_t>(j) * in_dim;
                double acc = b[static_cast<std::size_t>(j)];
                for (int i = 0; i < in_dim; ++i)
                    acc += wrow[i] * acts[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
                out[static_cast<std::size_t>(j)] = acc;
            }
            if (l + 1 < layers)
                for (double& v : out) v = v > 0.0 ? v : 0.0;
        }

        const double residual =
            acts[static_cast<std::size_t>(layers)][static_cast<std::size_t>(action)] -
            targets[s];
        loss += residual * residual * inv_batch;

        // d(loss)/d(output): only the taken action's entry is nonzero.
        delta[static_cast<std::size_t>(layers)]
            .assign(static_cast<std::size_t>(params.output_dim()), 0.0);
        delta[static_cast<std::size_t>(layers)][static_cast<std::size_t>(action)] =
            2.0 * residual * inv_batch;

        for (int l = layers - 1; l >= 0; --l) {
            const int in_dim = params.dims[static_cast<std::size_t>(l)];
            const int out_dim = params.dims[static_cast<std::size_t>(l) + 1];
            const auto& w = params.weights[static_cast<std::size_t>(l)];
            auto& gw = grads.weights[static_cast<std::size_t>(l)];
            auto& gb = grads.biases[static_cast<std::size_t>(l)];
            const auto& d_out = delta[static_cast<std::size_t>(l) + 1];
            auto& d_in = delta[static_cast<std::size_t>(l)];
            d_in.assign(static_cast<std::size_t>(in_dim), 0.0);
            for (int j = 0; j < out_dim; ++j) {
                const double dj = d_out[static_cast<std::size_t>(j)];
                if (dj == 0.0) continue;
                gb[static_cast<std::size_t>(j)] += dj;
                double* gwrow = gw.data() + static_cast<std::size_t>(j) * in_dim;
                const double* wrow = w.data() + static_cast<std::size_t>(j) * in_dim;
                const auto& in_act = acts[static_cast<std::size_t>(l)];
                for (int i = 0; i < in_dim; ++i) {
                    gwrow[i] += dj * in_act[static_cast<std::size_t>(i)];
                    d_in[static_cast<std::size_t>(i)] += dj * wrow[i];
                }
            }
            if (l > 0) {
                // Gate by the ReLU activation of the previous layer's output.
                const auto& gate = acts[static_cast<std::size_t>(l)];
                for (int i = 0; i < in_dim; ++i)
                    if (gate[static_cast<std::size_t>(i)] <= 0.0)
                        d_in[static_cast<std::size_t>(i)] = 0.0;
            }
        }
    }
    return loss;
}

}  // namespace mfg::neural
