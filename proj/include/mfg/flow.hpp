#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfg/distribution.hpp"
#include "mfg/env_model.hpp"
#include "mfg/policy.hpp"
#include "mfg/rng.hpp"

namespace mfg {

/// Mean-field sequence (mu_0, ..., mu_{N_T}) induced by a policy.
struct MeanFieldFlow {
    std::vector<Distribution> steps;

    int horizon() const { return static_cast<int>(steps.size()) - 1; }
    const Distribution& at(int n) const { return steps[static_cast<std::size_t>(n)]; }
};

/// One exact push-forward: mu'(x') = sum_{x,a} mu(x) pi_n(a|x) p_n(x'|x,a,mu).
/// Full double sum, no sampling; policy_slice holds pi_n(.|x, mu) per state.
inline Distribution forward_step(const Distribution& mu,
                                 const std::vector<std::vector<double>>& policy_slice,
                                 const EnvModel& model, int n) {
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();
    if (mu.size() != num_states)
        throw std::invalid_argument("forward_step: distribution/state-space mismatch");
    if (n < 0 || n >= model.horizon())
        throw std::invalid_argument("forward_step: timestep outside horizon");
    if (static_cast<int>(policy_slice.size()) != num_states)
        throw std::invalid_argument("forward_step: policy slice size mismatch");

    std::vector<double> next(static_cast<std::size_t>(num_states), 0.0);
    for (int x = 0; x < num_states; ++x) {
        const double mx = mu[x];
        if (mx == 0.0) continue;
        const auto& row = policy_slice[static_cast<std::size_t>(x)];
        if (static_cast<int>(row.size()) != num_actions)
            throw std::invalid_argument("forward_step: policy row size mismatch");
        double row_sum = 0.0;
        for (double p : row) {
            if (p < 0.0) throw std::invalid_argument("forward_step: negative action prob");
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > kMassTolerance)
            throw std::invalid_argument("forward_step: policy row does not sum to 1");
        for (int a = 0; a < num_actions; ++a) {
            const double w = mx * row[a];
            if (w == 0.0) continue;
            for (const auto& o : model.transition(n, x, a, mu))
                next[static_cast<std::size_t>(o.state)] += w * o.prob;
        }
    }
    return Distribution(std::move(next));
}

template <ActionPolicy P>
Distribution forward_step(const Distribution& mu, const P& policy, const EnvModel& model,
                          int n) {
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();
    std::vector<std::vector<double>> slice(
        static_cast<std::size_t>(num_states),
        std::vector<double>(static_cast<std::size_t>(num_actions)));
    for (int x = 0; x < num_states; ++x)
        policy.action_distribution(n, x, mu, slice[static_cast<std::size_t>(x)]);
    return forward_step(mu, slice, model, n);
}

/// Exact flow induced by a policy from mu_0, via repeated forward steps.
template <ActionPolicy P>
MeanFieldFlow induce_flow(const Distribution& mu0, const P& policy, const EnvModel& model) {
    MeanFieldFlow flow;
    flow.steps.reserve(static_cast<std::size_t>(model.horizon()) + 1);
    flow.steps.push_back(mu0);
    for (int n = 0; n < model.horizon(); ++n)
        flow.steps.push_back(forward_step(flow.steps.back(), policy, model, n));
    return flow;
}

/// Empirical flow from num_agents Monte-Carlo rollouts; the per-step
/// mean field is the agents' state histogram.
template <ActionPolicy P>
MeanFieldFlow sampled_flow(const Distribution& mu0, const P& policy, const EnvModel& model,
                           int num_agents, Rng& rng) {
    if (num_agents <= 0) throw std::invalid_argument("sampled_flow: need agents");
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();

    std::vector<int> states(static_cast<std::size_t>(num_agents));
    for (auto& s : states) s = mu0.sample(rng);

    auto histogram = [&](const std::vector<int>& st) {
        std::vector<double> h(static_cast<std::size_t>(num_states), 0.0);
        for (int s : st) h[static_cast<std::size_t>(s)] += 1.0;
        for (double& v : h) v /= num_agents;
        return Distribution(std::move(h));
    };

    MeanFieldFlow flow;
    flow.steps.push_back(histogram(states));
    std::vector<std::vector<double>> rows(
        static_cast<std::size_t>(num_states),
        std::vector<double>(static_cast<std::size_t>(num_actions)));
    for (int n = 0; n < model.horizon(); ++n) {
        const Distribution& mu = flow.steps.back();
        for (int x = 0; x < num_states; ++x)
            policy.action_distribution(n, x, mu, rows[static_cast<std::size_t>(x)]);
        for (auto& s : states) {
            const int a = sample_index(rows[static_cast<std::size_t>(s)], rng);
            s = sample_outcome(model.transition(n, s, a, mu), rng);
        }
        flow.steps.push_back(histogram(states));
    }
    return flow;
}

}  // namespace mfg
