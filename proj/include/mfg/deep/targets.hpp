#pragma once

#include <algorithm>
#include <vector>

#include "mfg/deep/replay_buffer.hpp"
#include "mfg/neural/mlp.hpp"
#include "mfg/neural/policy_head.hpp"

namespace mfg::deep {

/// Munchausen target: T = r + tau*log pi^{k-1}(a|s)
///   + gamma * sum_a' pi^k_tgt(a'|s') [Q_tgt(s',a') - tau*log pi^{k-1}(a'|s')].
/// The regularizer policy comes from the frozen previous-iteration snapshot,
/// the bootstrap policy and values from the current target network. Terminal
/// transitions keep only the reward and regularizer. All log terms clip at 1e-6.
inline std::vector<double> munchausen_targets(const std::vector<const Transition*>& batch,
                                              const neural::MlpParams& target_net,
                                              const neural::MlpParams& prev_net, double tau,
                                              double gamma) {
    const int num_actions = target_net.output_dim();
    std::vector<double> out;
    out.reserve(batch.size());
    std::vector<double> q(static_cast<std::size_t>(num_actions));
    std::vector<double> pi(static_cast<std::size_t>(num_actions));
    std::vector<double> q_prev(static_cast<std::size_t>(num_actions));
    std::vector<double> pi_prev(static_cast<std::size_t>(num_actions));

    for (const Transition* t : batch) {
        neural::mlp_forward(prev_net, t->obs, q_prev);
        neural::softmax_policy(q_prev, tau, pi_prev);
        double target = t->reward + tau * neural::clipped_log_prob(pi_prev, t->action);
        if (!t->terminal) {
            neural::mlp_forward(target_net, t->next_obs, q);
            neural::softmax_policy(q, tau, pi);
            neural::mlp_forward(prev_net, t->next_obs, q_prev);
            neural::softmax_policy(q_prev, tau, pi_prev);
            double boot = 0.0;
            for (int a = 0; a < num_actions; ++a)
                boot += pi[static_cast<std::size_t>(a)] *
                        (q[static_cast<std::size_t>(a)] -
                         tau * neural::clipped_log_prob(pi_prev, a));
            target += gamma * boot;
        }
        out.push_back(target);
    }
    return out;
}

/// Previous-iteration-only variant: both the (alpha-scaled) regularizer and
/// the bootstrap come from the frozen previous snapshot.
inline std::vector<double> vomd1_targets(const std::vector<const Transition*>& batch,
                                         const neural::MlpParams& prev_net, double tau,
                                         double alpha, double gamma) {
    const int num_actions = prev_net.output_dim();
    std::vector<double> out;
    out.reserve(batch.size());
    std::vector<double> q(static_cast<std::size_t>(num_actions));
    std::vector<double> pi(static_cast<std::size_t>(num_actions));

    for (const Transition* t : batch) {
        neural::mlp_forward(prev_net, t->obs, q);
        neural::softmax_policy(q, tau, pi);
        double target = t->reward + alpha * tau * neural::clipped_log_prob(pi, t->action);
        if (!t->terminal) {
            neural::mlp_forward(prev_net, t->next_obs, q);
            neural::softmax_policy(q, tau, pi);
            double boot = 0.0;
            for (int a = 0; a < num_actions; ++a)
                boot += pi[static_cast<std::size_t>(a)] *
                        (q[static_cast<std::size_t>(a)] -
                         tau * neural::clipped_log_prob(pi, a));
            target += gamma * boot;
        }
        out.push_back(target);
    }
    return out;
}

/// Plain DQN max-bootstrap target, used by the fictitious-play variants.
inline std::vector<double> dqn_targets(const std::vector<const Transition*>& batch,
                                       const neural::MlpParams& target_net, double gamma) {
    std::vector<double> out;
    out.reserve(batch.size());
    std::vector<double> q(static_cast<std::size_t>(target_net.output_dim()));
    for (const Transition* t : batch) {
        double target = t->reward;
        if (!t->terminal) {
            neural::mlp_forward(target_net, t->next_obs, q);
            target += gamma * *std::max_element(q.begin(), q.end());
        }
        out.push_back(target);
    }
    return out;
}

}  // namespace mfg::deep
