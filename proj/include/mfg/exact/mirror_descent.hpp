#pragma once

#include <stdexcept>
#include <vector>

#include "mfg/exact/backward_induction.hpp"
#include "mfg/exact/value.hpp"
#include "mfg/math.hpp"

namespace mfg::exact {

/// Accumulated (1/tau)-scaled Q table of classic online mirror descent.
using RegularizedQTable = TabularQ;

struct OmdResult {
    TabularPolicy policy;
    RegularizedQTable qbar;
    std::vector<double> exploitability_trace;
};

/// Classic online mirror descent: evaluate the previous policy on its own
/// flow, accumulate qbar += Q/tau, and play the row-wise softmax of qbar.
/// qbar starts at zero, so the first policy is uniform.
inline OmdResult omd_run(const EnvModel& model, const Distribution& mu0, double tau,
                         int iterations, double gamma = 1.0) {
    if (tau <= 0.0) throw std::invalid_argument("omd_run: tau must be positive");
    if (iterations < 1) throw std::invalid_argument("omd_run: need at least one iteration");
    const int horizon = model.horizon();
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();

    RegularizedQTable qbar(horizon, num_states, num_actions, 0.0);
    TabularPolicy policy = TabularPolicy::uniform(horizon, num_states, num_actions);

    OmdResult result;
    for (int k = 1; k <= iterations; ++k) {
        const MeanFieldFlow flow = induce_flow(mu0, policy, model);
        const TabularQ q = policy_q(policy, flow, model, gamma);
        for (int n = 0; n <= horizon; ++n) {
            for (int x = 0; x < num_states; ++x) {
                auto bar = qbar.row(n, x);
                const auto qrow = q.row(n, x);
                for (int a = 0; a < num_actions; ++a) bar[a] += qrow[a] / tau;
                softmax(bar, policy.row(n, x));
            }
        }
        result.exploitability_trace.push_back(exploitability(policy, mu0, model, gamma));
    }
    result.policy = std::move(policy);
    result.qbar = std::move(qbar);
    return result;
}

}  // namespace mfg::exact
