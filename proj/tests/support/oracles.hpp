#pragma once

// Brute-force reference computations, deliberately independent of the library
// implementation paths they check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "mfg/env_model.hpp"
#include "mfg/flow.hpp"
#include "mfg/policy.hpp"

namespace mfg::testing {

// Deterministic policy as a flat table: action_of[n * |X| + x].
using DeterministicPolicy = std::vector<int>;

/// Single-agent value of a deterministic policy against a frozen flow,
/// computed by propagating the agent's own state occupancy with plain loops.
inline double deterministic_policy_value(const DeterministicPolicy& choice,
                                         const Distribution& mu0, const MeanFieldFlow& flow,
                                         const EnvModel& model, double gamma = 1.0) {
    const int num_states = model.state_space().size();
    std::vector<double> occupancy(mu0.mass().begin(), mu0.mass().end());
    double value = 0.0;
    double discount = 1.0;
    for (int n = 0; n <= model.horizon(); ++n) {
        const Distribution& mu = flow.at(n);
        double step = 0.0;
        for (int x = 0; x < num_states; ++x) {
            if (occupancy[static_cast<std::size_t>(x)] == 0.0) continue;
            step += occupancy[static_cast<std::size_t>(x)] *
                    model.reward(n, x, choice[static_cast<std::size_t>(n) * num_states + x], mu);
        }
        value += discount * step;
        discount *= gamma;
        if (n == model.horizon()) break;
        std::vector<double> next(static_cast<std::size_t>(num_states), 0.0);
        for (int x = 0; x < num_states; ++x) {
            const double w = occupancy[static_cast<std::size_t>(x)];
            if (w == 0.0) continue;
            const int a = choice[static_cast<std::size_t>(n) * num_states + x];
            for (const auto& o : model.transition(n, x, a, mu))
                next[static_cast<std::size_t>(o.state)] += w * o.prob;
        }
        occupancy.swap(next);
    }
    return value;
}

/// Max deviation value over every deterministic policy, by full enumeration.
/// Feasible only for tiny games: |A|^((N_T+1)|X|) candidates.
inline double enumerate_best_deviation(const Distribution& mu0, const MeanFieldFlow& flow,
                                       const EnvModel& model, double gamma = 1.0) {
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();
    const int cells = (model.horizon() + 1) * num_states;
    std::uint64_t total = 1;
    for (int i = 0; i < cells; ++i) total *= static_cast<std::uint64_t>(num_actions);

    double best = -1e300;
    DeterministicPolicy choice(static_cast<std::size_t>(cells), 0);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t rest = code;
        for (int i = 0; i < cells; ++i) {
            choice[static_cast<std::size_t>(i)] = static_cast<int>(rest % num_actions);
            rest /= num_actions;
        }
        const double v = deterministic_policy_value(choice, mu0, flow, model, gamma);
        if (v > best) best = v;
    }
    return best;
}

/// Value of an arbitrary (stochastic) policy against a frozen flow, again by
/// direct occupancy propagation.
template <ActionPolicy P>
double stochastic_policy_value_on_flow(const P& policy, const Distribution& mu0,
                                       const MeanFieldFlow& flow, const EnvModel& model,
                                       double gamma = 1.0) {
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();
    std::vector<double> occupancy(mu0.mass().begin(), mu0.mass().end());
    std::vector<double> row(static_cast<std::size_t>(num_actions));
    double value = 0.0;
    double discount = 1.0;
    for (int n = 0; n <= model.horizon(); ++n) {
        const Distribution& mu = flow.at(n);
        std::vector<double> next(static_cast<std::size_t>(num_states), 0.0);
        for (int x = 0; x < num_states; ++x) {
            const double w = occupancy[static_cast<std::size_t>(x)];
            if (w == 0.0) continue;
            policy.action_distribution(n, x, mu, row);
            for (int a = 0; a < num_actions; ++a) {
                const double wa = w * row[static_cast<std::size_t>(a)];
                if (wa == 0.0) continue;
                value += discount * wa * model.reward(n, x, a, mu);
                if (n < model.horizon())
                    for (const auto& o : model.transition(n, x, a, mu))
                        next[static_cast<std::size_t>(o.state)] += wa * o.prob;
            }
        }
        discount *= gamma;
        occupancy.swap(next);
    }
    return value;
}

/// Reference MLP forward pass: per-neuron evaluation through index
/// arithmetic, no shared accumulation code with the library.
inline std::vector<double> reference_mlp_forward(const std::vector<int>& dims,
                                                 const std::vector<std::vector<double>>& weights,
                                                 const std::vector<std::vector<double>>& biases,
                                                 const std::vector<double>& input) {
    auto relu = [](double v) { return v > 0.0 ? v : 0.0; };
    std::vector<double> layer = input;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const int in_dim = dims[l];
        const int out_dim = dims[l + 1];
        std::vector<double> next(static_cast<std::size_t>(out_dim));
        for (int j = 0; j < out_dim; ++j) {
            double z = biases[l][static_cast<std::size_t>(j)];
            for (int i = 0; i < in_dim; ++i)
                z += weights[l][static_cast<std::size_t>(j * in_dim + i)] *
                     layer[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(j)] = (l + 2 < dims.size()) ? relu(z) : z;
        }
        layer = next;
    }
    return layer;
}

}  // namespace mfg::testing
