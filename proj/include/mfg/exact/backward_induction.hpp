#pragma once

#include <algorithm>
#include <stdexcept>

#include "mfg/env_model.hpp"
#include "mfg/flow.hpp"
#include "mfg/math.hpp"
#include "mfg/policy.hpp"
#include "mfg/tabular.hpp"

namespace mfg::exact {

inline void check_flow_shape(const MeanFieldFlow& flow, const EnvModel& model) {
    if (flow.horizon() != model.horizon())
        throw std::invalid_argument("flow length does not match model horizon");
    for (const auto& mu : flow.steps)
        if (mu.size() != model.state_space().size())
            throw std::invalid_argument("flow distribution size mismatch");
}

/// Optimal Q against a frozen flow, by backward induction:
/// Q_n(x,a) = r_n(x,a,mu_n) + gamma * sum_x' p(x'|x,a,mu_n) max_a' Q_{n+1}(x',a').
/// The terminal layer is the reward at N_T (terminal reward where the model
/// defines one, running reward otherwise).
inline TabularQ best_response_q(const MeanFieldFlow& flow, const EnvModel& model,
                                double gamma = 1.0) {
    check_flow_shape(flow, model);
    const int horizon = model.horizon();
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();
    TabularQ q(horizon, num_states, num_actions);

    for (int x = 0; x < num_states; ++x)
        for (int a = 0; a < num_actions; ++a)
            q.at(horizon, x, a) = model.reward(horizon, x, a, flow.at(horizon));

    std::vector<double> next_value(static_cast<std::size_t>(num_states));
    for (int n = horizon - 1; n >= 0; --n) {
        for (int x = 0; x < num_states; ++x) {
            const auto row = q.row(n + 1, x);
            next_value[static_cast<std::size_t>(x)] = *std::max_element(row.begin(), row.end());
        }
        const Distribution& mu = flow.at(n);
        for (int x = 0; x < num_states; ++x) {
            for (int a = 0; a < num_actions; ++a) {
                double boot = 0.0;
                for (const auto& o : model.transition(n, x, a, mu))
                    boot += o.prob * next_value[static_cast<std::size_t>(o.state)];
                q.at(n, x, a) = model.reward(n, x, a, mu) + gamma * boot;
            }
        }
    }
    return q;
}

/// Evaluation of a fixed policy against a frozen flow:
/// Q_n(x,a) = r_n + gamma * sum_x' p(x'|x,a,mu_n) sum_a' pi_{n+1}(a'|x') Q_{n+1}(x',a').
inline TabularQ policy_q(const TabularPolicy& policy, const MeanFieldFlow& flow,
                         const EnvModel& model, double gamma = 1.0) {
    check_flow_shape(flow, model);
    const int horizon = model.horizon();
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();
    if (policy.horizon() != horizon || policy.num_states() != num_states ||
        policy.num_actions() != num_actions)
        throw std::invalid_argument("policy_q: policy shape mismatch");
    TabularQ q(horizon, num_states, num_actions);

    for (int x = 0; x < num_states; ++x)
        for (int a = 0; a < num_actions; ++a)
            q.at(horizon, x, a) = model.reward(horizon, x, a, flow.at(horizon));

    std::vector<double> next_value(static_cast<std::size_t>(num_states));
    for (int n = horizon - 1; n >= 0; --n) {
        for (int x = 0; x < num_states; ++x) {
            const auto qrow = q.row(n + 1, x);
            const auto prow = policy.row(n + 1, x);
            double v = 0.0;
            for (int a = 0; a < num_actions; ++a) v += prow[a] * qrow[a];
            next_value[static_cast<std::size_t>(x)] = v;
        }
        const Distribution& mu = flow.at(n);
        for (int x = 0; x < num_states; ++x) {
            for (int a = 0; a < num_actions; ++a) {
                double boot = 0.0;
                for (const auto& o : model.transition(n, x, a, mu))
                    boot += o.prob * next_value[static_cast<std::size_t>(o.state)];
                q.at(n, x, a) = model.reward(n, x, a, mu) + gamma * boot;
            }
        }
    }
    return q;
}

/// Deterministic argmax policy; ties break to the lowest action index.
inline TabularPolicy greedy_policy(const TabularQ& q) {
    TabularPolicy policy(q.horizon(), q.num_states(), q.num_actions());
    for (int n = 0; n <= q.horizon(); ++n) {
        for (int x = 0; x < q.num_states(); ++x) {
            const int best = argmax_lowest(q.row(n, x));
            policy.row(n, x)[static_cast<std::size_t>(best)] = 1.0;
        }
    }
    return policy;
}

}  // namespace mfg::exact
