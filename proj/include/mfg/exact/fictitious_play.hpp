#pragma once

#include <stdexcept>
#include <vector>

#include "mfg/exact/backward_induction.hpp"
#include "mfg/exact/value.hpp"

namespace mfg::exact {

struct FpResult {
    TabularPolicy average_policy;
    MeanFieldFlow average_flow;
    std::vector<double> exploitability_trace;
};

/// Classic fictitious play. Each iteration pushes the previous best response
/// forward, folds its flow into the running average, and best-responds to the
/// averaged flow. The returned policy is the behavioral mixture of the
/// iterates, weighted per (n, x) by each iterate's state visitation, which is
/// exactly the policy generating the averaged flow.
inline FpResult fp_run(const EnvModel& model, const Distribution& mu0, int iterations,
                       double gamma = 1.0) {
    if (iterations < 1) throw std::invalid_argument("fp_run: need at least one iteration");
    const int horizon = model.horizon();
    const int num_states = model.state_space().size();
    const int num_actions = model.action_space().size();

    TabularPolicy current = TabularPolicy::uniform(horizon, num_states, num_actions);
    MeanFieldFlow average_flow;

    // Running visitation-weighted mixture: numerator[n][x][a], denominator[n][x].
    TabularQ mix_num(horizon, num_states, num_actions, 0.0);
    std::vector<double> mix_den(static_cast<std::size_t>(horizon + 1) * num_states, 0.0);

    FpResult result;
    for (int k = 1; k <= iterations; ++k) {
        const MeanFieldFlow flow = induce_flow(mu0, current, model);

        const double w_old = static_cast<double>(k - 1) / k;
        const double w_new = 1.0 / k;
        if (k == 1) {
            average_flow = flow;
        } else {
            for (int n = 0; n <= horizon; ++n) {
                std::vector<double> mixed(static_cast<std::size_t>(num_states));
                for (int x = 0; x < num_states; ++x)
                    mixed[static_cast<std::size_t>(x)] =
                        w_old * average_flow.at(n)[x] + w_new * flow.at(n)[x];
                average_flow.steps[static_cast<std::size_t>(n)] =
                    Distribution(std::move(mixed));
            }
        }

        for (int n = 0; n <= horizon; ++n) {
            for (int x = 0; x < num_states; ++x) {
                const double visit = flow.at(n)[x];
                auto num_row = mix_num.row(n, x);
                const auto pol_row = current.row(n, x);
                for (int a = 0; a < num_actions; ++a)
                    num_row[a] = w_old * num_row[a] + w_new * visit * pol_row[a];
                auto& den = mix_den[static_cast<std::size_t>(n) * num_states + x];
                den = w_old * den + w_new * visit;
            }
        }

        TabularPolicy mixture(horizon, num_states, num_actions);
        for (int n = 0; n <= horizon; ++n) {
            for (int x = 0; x < num_states; ++x) {
                const double den = mix_den[static_cast<std::size_t>(n) * num_states + x];
                auto out = mixture.row(n, x);
                if (den > 0.0) {
                    const auto num_row = mix_num.row(n, x);
                    for (int a = 0; a < num_actions; ++a) out[a] = num_row[a] / den;
                } else {
                    for (int a = 0; a < num_actions; ++a) out[a] = 1.0 / num_actions;
                }
            }
        }
        result.exploitability_trace.push_back(exploitability(mixture, mu0, model, gamma));
        result.average_policy = std::move(mixture);

        current = greedy_policy(best_response_q(average_flow, model, gamma));
    }
    result.average_flow = std::move(average_flow);
    return result;
}

}  // namespace mfg::exact
