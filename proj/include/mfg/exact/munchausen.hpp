#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mfg/exact/backward_induction.hpp"
#include "mfg/math.hpp"

namespace mfg::exact {

namespace detail {

// One regularized backward pass: given the previous iteration's policy and
// the frozen flow, computes Qtilde^k = Q^k + tau*ln(pi^{k-1}) implicitly and
// returns pi^k = softmax(Qtilde^k / tau). The layer-(n+1) pair is final when
// layer n is evaluated, so the recursion is a direct sweep.
inline TabularPolicy munchausen_backward_pass(const TabularPolicy& prev,
                                              const MeanFieldFlow& flow,
                                              const EnvModel& model, double tau,
                                              double gamma, TabularQ* qtilde_out = nullptr) {
    const int horizon = model.horizon();
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();

    TabularQ qtilde(horizon, num_states, num_actions);
    TabularPolicy policy(horizon, num_states, num_actions);
    std::vector<double> scaled(static_cast<std::size_t>(num_actions));

    for (int n = horizon; n >= 0; --n) {
        const Distribution& mu = flow.at(n);
        std::vector<double> inner(static_cast<std::size_t>(num_states), 0.0);
        if (n < horizon) {
            for (int x = 0; x < num_states; ++x) {
                const auto qrow = qtilde.row(n + 1, x);
                const auto pirow = policy.row(n + 1, x);
                const auto prevrow = prev.row(n + 1, x);
                double v = 0.0;
                for (int a = 0; a < num_actions; ++a)
                    v += pirow[a] * (qrow[a] - tau * std::log(prevrow[a]));
                inner[static_cast<std::size_t>(x)] = v;
            }
        }
        for (int x = 0; x < num_states; ++x) {
            auto qrow = qtilde.row(n, x);
            const auto prevrow = prev.row(n, x);
            for (int a = 0; a < num_actions; ++a) {
                double v = model.reward(n, x, a, mu) + tau * std::log(prevrow[a]);
                if (n < horizon) {
                    double boot = 0.0;
                    for (const auto& o : model.transition(n, x, a, mu))
                        boot += o.prob * inner[static_cast<std::size_t>(o.state)];
                    v += gamma * boot;
                }
                qrow[a] = v;
            }
            for (int a = 0; a < num_actions; ++a) scaled[static_cast<std::size_t>(a)] = qrow[a] / tau;
            softmax(scaled, policy.row(n, x));
        }
    }
    if (qtilde_out) *qtilde_out = std::move(qtilde);
    return policy;
}

// One explicit-sum pass: evaluates the fresh Q^k whose bootstrap uses the
// layer-local softmax of (qsum + Q^k)/tau, then folds Q^k into qsum. Returns
// pi^k = softmax((qsum + Q^k)/tau). This is the summation side of the
// equivalence that the Munchausen pass mimics.
inline TabularPolicy explicit_sum_pass(TabularQ& qsum, const MeanFieldFlow& flow,
                                       const EnvModel& model, double tau, double gamma) {
    const int horizon = model.horizon();
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();

    TabularQ q(horizon, num_states, num_actions);
    TabularPolicy policy(horizon, num_states, num_actions);
    std::vector<double> logits(static_cast<std::size_t>(num_actions));

    for (int n = horizon; n >= 0; --n) {
        const Distribution& mu = flow.at(n);
        std::vector<double> inner(static_cast<std::size_t>(num_states), 0.0);
        if (n < horizon) {
            for (int x = 0; x < num_states; ++x) {
                const auto qrow = q.row(n + 1, x);
                const auto pirow = policy.row(n + 1, x);
                double v = 0.0;
                for (int a = 0; a < num_actions; ++a) v += pirow[a] * qrow[a];
                inner[static_cast<std::size_t>(x)] = v;
            }
        }
        for (int x = 0; x < num_states; ++x) {
            auto qrow = q.row(n, x);
            const auto sumrow = qsum.row(n, x);
            for (int a = 0; a < num_actions; ++a) {
                double v = model.reward(n, x, a, mu);
                if (n < horizon) {
                    double boot = 0.0;
                    for (const auto& o : model.transition(n, x, a, mu))
                        boot += o.prob * inner[static_cast<std::size_t>(o.state)];
                    v += gamma * boot;
                }
                qrow[a] = v;
                logits[static_cast<std::size_t>(a)] = (sumrow[a] + v) / tau;
            }
            softmax(logits, policy.row(n, x));
        }
    }
    for (int n = 0; n <= horizon; ++n)
        for (int x = 0; x < num_states; ++x) {
            auto sumrow = qsum.row(n, x);
            const auto qrow = q.row(n, x);
            for (int a = 0; a < num_actions; ++a) sumrow[a] += qrow[a];
        }
    return policy;
}

}  // namespace detail

struct MunchausenTabularResult {
    TabularPolicy policy;
    std::vector<TabularPolicy> iterates;
};

/// Tabular regularized value iteration: each iteration regenerates the flow
/// from the previous policy and runs one Munchausen backward pass. The
/// iterate sequence coincides with softmax((1/tau) sum_i Q^i) mirror descent.
inline MunchausenTabularResult munchausen_tabular_run(const EnvModel& model,
                                                      const Distribution& mu0, double tau,
                                                      int iterations, double gamma = 1.0) {
    if (tau <= 0.0) throw std::invalid_argument("munchausen_tabular_run: tau must be positive");
    if (iterations < 1) throw std::invalid_argument("munchausen_tabular_run: need iterations");
    const int horizon = model.horizon();
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();

    MunchausenTabularResult result;
    TabularPolicy policy = TabularPolicy::uniform(horizon, num_states, num_actions);
    for (int k = 1; k <= iterations; ++k) {
        const MeanFieldFlow flow = induce_flow(mu0, policy, model);
        policy = detail::munchausen_backward_pass(policy, flow, model, tau, gamma);
        result.iterates.push_back(policy);
    }
    result.policy = std::move(policy);
    return result;
}

/// Runs the Munchausen recursion and the explicit Q-summation side by side on
/// identical flows and returns the largest policy deviation over all
/// (iteration, timestep, state, action). The two constructions agree exactly
/// in real arithmetic; anything above rounding noise indicates a defect.
inline double theorem1_check(const EnvModel& model, const Distribution& mu0, double tau,
                             int iterations, double gamma = 1.0) {
    if (tau <= 0.0) throw std::invalid_argument("theorem1_check: tau must be positive");
    const int horizon = model.horizon();
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();

    TabularPolicy pi_munch = TabularPolicy::uniform(horizon, num_states, num_actions);
    TabularPolicy pi_sum = pi_munch;
    TabularQ qsum(horizon, num_states, num_actions, 0.0);

    double worst = 0.0;
    for (int k = 1; k <= iterations; ++k) {
        const MeanFieldFlow flow = induce_flow(mu0, pi_sum, model);
        pi_munch = detail::munchausen_backward_pass(pi_munch, flow, model, tau, gamma);
        pi_sum = detail::explicit_sum_pass(qsum, flow, model, tau, gamma);
        for (int n = 0; n <= horizon; ++n)
            for (int x = 0; x < num_states; ++x) {
                const auto a_row = pi_munch.row(n, x);
                const auto b_row = pi_sum.row(n, x);
                for (int a = 0; a < num_actions; ++a)
                    worst = std::max(worst, std::abs(a_row[a] - b_row[a]));
            }
    }
    return worst;
}

}  // namespace mfg::exact
