#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "mfg/exact/backward_induction.hpp"
#include "mfg/flow.hpp"

namespace mfg::exact {

/// Exact expected total reward of a policy against a frozen flow:
/// J = sum_n gamma^n <mu_n, sum_a pi_n(a|., mu_n) r_n(., a, mu_n)>.
template <ActionPolicy P>
double policy_value_on_flow(const P& policy, const MeanFieldFlow& flow, const EnvModel& model,
                            double gamma = 1.0) {
    check_flow_shape(flow, model);
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();
    std::vector<double> row(static_cast<std::size_t>(num_actions));
    double value = 0.0;
    double discount = 1.0;
    for (int n = 0; n <= model.horizon(); ++n) {
        const Distribution& mu = flow.at(n);
        double step = 0.0;
        for (int x = 0; x < num_states; ++x) {
            if (mu[x] == 0.0) continue;
            policy.action_distribution(n, x, mu, row);
            double expected = 0.0;
            for (int a = 0; a < num_actions; ++a)
                if (row[static_cast<std::size_t>(a)] > 0.0)
                    expected += row[static_cast<std::size_t>(a)] * model.reward(n, x, a, mu);
            step += mu[x] * expected;
        }
        value += discount * step;
        discount *= gamma;
    }
    return value;
}

/// J(pi; mu^pi): value of the policy against the flow it itself induces.
template <ActionPolicy P>
double policy_value(const P& policy, const Distribution& mu0, const EnvModel& model,
                    double gamma = 1.0) {
    return policy_value_on_flow(policy, induce_flow(mu0, policy, model), model, gamma);
}

/// <mu0, max_a Q(., a)> at time 0.
inline double best_response_value(const TabularQ& q, const Distribution& mu0) {
    double value = 0.0;
    for (int x = 0; x < q.num_states(); ++x) {
        if (mu0[x] == 0.0) continue;
        const auto row = q.row(0, x);
        value += mu0[x] * *std::max_element(row.begin(), row.end());
    }
    return value;
}

/// Restriction of a (possibly population-dependent) policy to a frozen flow:
/// tabular rows pi_n(.|x, mu_n).
template <ActionPolicy P>
TabularPolicy freeze_policy(const P& policy, const MeanFieldFlow& flow,
                            const EnvModel& model) {
    check_flow_shape(flow, model);
    TabularPolicy frozen(model.horizon(), model.state_space().size(),
                         model.action_space().size());
    for (int n = 0; n <= model.horizon(); ++n)
        for (int x = 0; x < model.state_space().size(); ++x)
            policy.action_distribution(n, x, flow.at(n), frozen.row(n, x));
    return frozen;
}

/// Best single-agent deviation gain against the policy's own flow; zero
/// exactly at a Nash equilibrium. Both sides are evaluated through backward
/// induction on the same flow, so a no-choice game cancels exactly; the
/// result is clamped below at 0 against rounding.
template <ActionPolicy P>
double exploitability(const P& policy, const Distribution& mu0, const EnvModel& model,
                      double gamma = 1.0) {
    const MeanFieldFlow flow = induce_flow(mu0, policy, model);
    const TabularPolicy frozen = freeze_policy(policy, flow, model);
    const TabularQ star = best_response_q(flow, model, gamma);
    const TabularQ own = policy_q(frozen, flow, model, gamma);
    double gap = 0.0;
    for (int x = 0; x < model.state_space().size(); ++x) {
        if (mu0[x] == 0.0) continue;
        const auto star_row = star.row(0, x);
        const auto own_row = own.row(0, x);
        const auto pi_row = frozen.row(0, x);
        double own_value = 0.0;
        for (std::size_t a = 0; a < own_row.size(); ++a) own_value += pi_row[a] * own_row[a];
        gap += mu0[x] * (*std::max_element(star_row.begin(), star_row.end()) - own_value);
    }
    return std::max(gap, 0.0);
}

/// Arithmetic mean of per-mu0 exploitabilities over a distribution set.
template <ActionPolicy P>
double mean_exploitability(const P& policy, std::span<const Distribution> mu0s,
                           const EnvModel& model, double gamma = 1.0) {
    double total = 0.0;
    for (const auto& mu0 : mu0s) total += exploitability(policy, mu0, model, gamma);
    return total / static_cast<double>(mu0s.size());
}

}  // namespace mfg::exact
