#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfg/deep/policies.hpp"
#include "mfg/deep/replay_buffer.hpp"
#include "mfg/deep/targets.hpp"
#include "mfg/deep/train_config.hpp"
#include "mfg/encoding.hpp"
#include "mfg/env_model.hpp"
#include "mfg/exact/value.hpp"
#include "mfg/flow.hpp"
#include "mfg/neural/adam.hpp"
#include "mfg/neural/mlp.hpp"
#include "mfg/policy.hpp"
#include "mfg/rng.hpp"

namespace mfg::deep {

/// eps-greedy draw: uniform action with probability eps, otherwise the
/// argmax (lowest index on ties).
inline int epsilon_greedy(std::span<const double> qvals, double eps, Rng& rng) {
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("epsilon_greedy: bad epsilon");
    if (uniform01(rng) < eps) return uniform_int(rng, static_cast<int>(qvals.size()));
    return argmax_lowest(qvals);
}

struct IterationMetrics {
    int iteration = 0;
    std::vector<double> per_mu0_exploitability;
    double mean_exploitability = 0.0;
    double loss_mean = 0.0;
    double loss_max = 0.0;
    int env_steps = 0;
    int gradient_updates = 0;
    double wall_seconds = 0.0;
    std::int64_t stored_params = 0;  // parameters retained by the algorithm
};

struct DeepTrainResult {
    Variant variant = Variant::momd;
    double tau = 0.0;
    ObsEncoding encoding = ObsEncoding::master;
    int horizon = 0;
    neural::MlpParams final_net;                  // OMD-family output
    std::vector<neural::MlpParams> stored_nets;   // FP-family output
    std::vector<IterationMetrics> metrics;
    int buffer_clears = 0;
    std::int64_t total_target_syncs = 0;

    AnyPolicy policy() const {
        if (variant == Variant::vfp || variant == Variant::mfp)
            return FpMixturePolicy(stored_nets, encoding, horizon);
        return SoftmaxQPolicy(final_net, tau, encoding, horizon);
    }
};

struct TrainHooks {
    // Called once per iteration with the network trained in that iteration.
    std::function<void(int iteration, const neural::MlpParams&)> on_checkpoint;
};

namespace detail {

// Linear decay from exploration_initial to exploration_final over the first
// exploration_fraction of an iteration's planned steps, constant after.
struct EpsilonSchedule {
    double initial = 1.0;
    double final_value = 0.05;
    int decay_steps = 1;

    EpsilonSchedule(const TrainConfig& config, int planned_steps)
        : initial(config.exploration_initial), final_value(config.exploration_final),
          decay_steps(std::max(1, static_cast<int>(config.exploration_fraction *
                                                   static_cast<double>(planned_steps)))) {}

    double at(int step) const {
        if (step >= decay_steps) return final_value;
        return initial + (final_value - initial) * (static_cast<double>(step) / decay_steps);
    }
};

template <ActionPolicy P>
std::vector<MeanFieldFlow> compute_flows(const std::vector<Distribution>& mu0s,
                                         const P& policy, const EnvModel& model,
                                         const TrainConfig& config, Rng& rng) {
    std::vector<MeanFieldFlow> flows;
    flows.reserve(mu0s.size());
    for (const auto& mu0 : mu0s) {
        if (config.sampled_flows)
            flows.push_back(sampled_flow(mu0, policy, model, config.number_of_agents, rng));
        else
            flows.push_back(induce_flow(mu0, policy, model));
    }
    return flows;
}

struct LossTracker {
    double sum = 0.0;
    double max = 0.0;
    int count = 0;
    void add(double loss) {
        sum += loss;
        if (loss > max) max = loss;
        ++count;
    }
    double mean() const { return count > 0 ? sum / count : 0.0; }
};

// One data-collection + gradient phase over the precomputed flows. The inner
// loop over flows interleaves experience from every mu0 within each episode;
// that ordering is what keeps the buffer mixed across initial distributions.
template <typename ActFn, typename TargetFn>
void run_training_phase(const EnvModel& model, const std::vector<MeanFieldFlow>& flows,
                        const TrainConfig& config, ObsEncoding encoding,
                        neural::MlpParams& online, neural::MlpParams& target,
                        neural::AdamState& adam, ReplayBuffer& buffer, Rng& rng,
                        ActFn&& choose_action, TargetFn&& make_targets,
                        LossTracker& losses, int& env_steps, int& gradient_updates,
                        std::int64_t& target_syncs) {
    const int horizon = model.horizon();
    const int planned = std::min(
        config.max_steps_per_iteration,
        config.episodes_per_iteration * static_cast<int>(flows.size()) * horizon);
    const EpsilonSchedule eps(config, planned);

    neural::MlpGradients grads = neural::MlpGradients::like(online);
    std::vector<std::span<const double>> batch_obs(static_cast<std::size_t>(config.batch_size));
    std::vector<int> batch_actions(static_cast<std::size_t>(config.batch_size));

    for (int episode = 0; episode < config.episodes_per_iteration; ++episode) {
        for (std::size_t d = 0; d < flows.size(); ++d) {
            const MeanFieldFlow& flow = flows[d];
            int x = flow.at(0).sample(rng);
            for (int n = 0; n < horizon; ++n) {
                if (env_steps >= config.max_steps_per_iteration) return;
                Transition t;
                t.obs = encode_observation(encoding, n, x, flow.at(n), horizon);
                t.action = choose_action(t.obs, eps.at(env_steps), rng);
                t.reward = model.reward(n, x, t.action, flow.at(n));
                const int next = sample_outcome(model.transition(n, x, t.action, flow.at(n)), rng);
                t.next_obs = encode_observation(encoding, n + 1, next, flow.at(n + 1), horizon);
                t.terminal = (n + 1 == horizon);
                buffer.push(std::move(t));
                ++env_steps;
                x = next;

                if (buffer.size() < static_cast<std::size_t>(config.batch_size)) continue;
                for (int g = 0; g < config.gradient_steps; ++g) {
                    const auto batch = buffer.sample(
                        static_cast<std::size_t>(config.batch_size), rng);
                    const std::vector<double> targets = make_targets(batch);
                    for (std::size_t i = 0; i < batch.size(); ++i) {
                        batch_obs[i] = batch[i]->obs;
                        batch_actions[i] = batch[i]->action;
                    }
                    losses.add(neural::mlp_backward(online, batch_obs, batch_actions,
                                                    targets, grads));
                    neural::adam_step(online, grads, adam);
                    ++gradient_updates;
                    if (gradient_updates % config.freq_to_update_target == 0) {
                        target = neural::hard_target_sync(online);
                        ++target_syncs;
                    }
                }
            }
        }
    }
}

}  // namespace detail

/// Master deep online mirror descent (and its vanilla ablations). Each
/// iteration: exact flows under the previous policy for every mu0, buffer
/// reset, one interleaved collection/gradient phase on the regularized
/// target, then the policy update pi^k = softmax(Q_theta / tau).
inline DeepTrainResult omd_deep_train(const EnvModel& model,
                                      const std::vector<Distribution>& mu0s,
                                      const TrainConfig& config,
                                      const TrainHooks& hooks = {}) {
    config.validate();
    if (mu0s.empty()) throw std::invalid_argument("omd_deep_train: empty distribution set");
    if (config.variant == Variant::vfp || config.variant == Variant::mfp)
        throw std::invalid_argument("omd_deep_train: FP variant passed to OMD trainer");

    const ObsEncoding encoding = encoding_for(config.variant);
    const int horizon = model.horizon();
    const int obs_len = observation_length(encoding, horizon, model.state_space().size());
    const int num_actions = model.action_space().size();

    std::vector<int> dims{obs_len};
    dims.insert(dims.end(), config.neurons_in_each_layer.begin(),
                config.neurons_in_each_layer.end());
    dims.push_back(num_actions);

    Rng init_rng(mix_seed(config.seed, 0));
    neural::MlpParams online = neural::MlpParams::he_uniform(dims, init_rng);
    neural::MlpParams target = online;
    neural::MlpParams prev = online;  // pi^0 is the softmax of the untrained net
    neural::AdamState adam =
        neural::AdamState::init(online, {.learning_rate = config.learning_rate});
    ReplayBuffer buffer(static_cast<std::size_t>(config.buffer_capacity));

    DeepTrainResult result;
    result.variant = config.variant;
    result.tau = config.omd_tau;
    result.encoding = encoding;
    result.horizon = horizon;

    const double tau = config.omd_tau;
    std::vector<double> qscratch(static_cast<std::size_t>(num_actions));
    std::vector<double> pscratch(static_cast<std::size_t>(num_actions));

    for (int k = 1; k <= config.iterations; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(k)));

        const SoftmaxQPolicy behavior_prev(prev, tau, encoding, horizon);
        const auto flows = detail::compute_flows(mu0s, behavior_prev, model, config, rng);

        buffer.clear();
        ++result.buffer_clears;
        target = neural::hard_target_sync(online);

        detail::LossTracker losses;
        int env_steps = 0;
        int gradient_updates = 0;

        auto choose_action = [&](const std::vector<double>& obs, double eps, Rng& r) {
            if (config.variant == Variant::vomd1) {
                // Previous-iteration softmax policy as the behavior policy.
                if (uniform01(r) < eps) return uniform_int(r, num_actions);
                neural::mlp_forward(prev, obs, qscratch);
                neural::softmax_policy(qscratch, tau, pscratch);
                return sample_index(pscratch, r);
            }
            neural::mlp_forward(online, obs, qscratch);
            return epsilon_greedy(qscratch, eps, r);
        };
        auto make_targets = [&](const std::vector<const Transition*>& batch) {
            if (config.variant == Variant::vomd1)
                return vomd1_targets(batch, prev, tau, config.omd_alpha, config.gamma);
            return munchausen_targets(batch, target, prev, tau, config.gamma);
        };

        detail::run_training_phase(model, flows, config, encoding, online, target, adam,
                                   buffer, rng, choose_action, make_targets, losses,
                                   env_steps, gradient_updates, result.total_target_syncs);

        prev = online;  // snapshot becomes pi^k and the next iteration's regularizer
        if (hooks.on_checkpoint) hooks.on_checkpoint(k, online);

        IterationMetrics m;
        m.iteration = k;
        const SoftmaxQPolicy policy_k(online, tau, encoding, horizon);
        for (const auto& mu0 : mu0s)
            m.per_mu0_exploitability.push_back(exact::exploitability(policy_k, mu0, model));
        double total = 0.0;
        for (double e : m.per_mu0_exploitability) total += e;
        m.mean_exploitability = total / static_cast<double>(mu0s.size());
        m.loss_mean = losses.mean();
        m.loss_max = losses.max;
        m.env_steps = env_steps;
        m.gradient_updates = gradient_updates;
        m.stored_params = 3 * online.parameter_count();  // online + target + snapshot
        m.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.metrics.push_back(std::move(m));
    }
    result.final_net = std::move(online);
    return result;
}

/// Algorithm contract wrappers for the population-aware and vanilla variants.
inline DeepTrainResult momd_train(const EnvModel& model, const std::vector<Distribution>& mu0s,
                                  const TrainConfig& config, const TrainHooks& hooks = {}) {
    if (config.variant != Variant::momd)
        throw std::invalid_argument("momd_train: config variant must be m-omd");
    return omd_deep_train(model, mu0s, config, hooks);
}

inline DeepTrainResult vomd_train(const EnvModel& model, const std::vector<Distribution>& mu0s,
                                  const TrainConfig& config, const TrainHooks& hooks = {}) {
    if (config.variant != Variant::vomd1 && config.variant != Variant::vomd2)
        throw std::invalid_argument("vomd_train: config variant must be v-omd1 or v-omd2");
    return omd_deep_train(model, mu0s, config, hooks);
}

/// Deep fictitious play. Each iteration folds the previous best response's
/// flow into a per-mu0 running average, trains a fresh DQN against the
/// averaged flows, and stores it; the policy is the uniform mixture of the
/// stored networks' greedy policies. Stored parameters grow linearly in K.
inline DeepTrainResult fp_deep_train(const EnvModel& model,
                                     const std::vector<Distribution>& mu0s,
                                     const TrainConfig& config, bool population_aware,
                                     const TrainHooks& hooks = {}) {
    config.validate();
    if (mu0s.empty()) throw std::invalid_argument("fp_deep_train: empty distribution set");
    if (config.variant != (population_aware ? Variant::mfp : Variant::vfp))
        throw std::invalid_argument("fp_deep_train: variant/population_aware mismatch");

    const ObsEncoding encoding = encoding_for(config.variant);
    const int horizon = model.horizon();
    const int obs_len = observation_length(encoding, horizon, model.state_space().size());
    const int num_actions = model.action_space().size();

    std::vector<int> dims{obs_len};
    dims.insert(dims.end(), config.neurons_in_each_layer.begin(),
                config.neurons_in_each_layer.end());
    dims.push_back(num_actions);

    ReplayBuffer buffer(static_cast<std::size_t>(config.buffer_capacity));
    std::vector<MeanFieldFlow> average_flows;

    DeepTrainResult result;
    result.variant = config.variant;
    result.tau = config.omd_tau;
    result.encoding = encoding;
    result.horizon = horizon;

    std::vector<double> qscratch(static_cast<std::size_t>(num_actions));

    for (int k = 1; k <= config.iterations; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(k)));

        // Forward update with the previous best response (uniform at k = 1),
        // then the running average over iterations, per mu0.
        std::vector<MeanFieldFlow> flows;
        if (result.stored_nets.empty()) {
            flows = detail::compute_flows(mu0s, UniformPolicy(num_actions), model, config, rng);
        } else {
            const GreedyQPolicy last(result.stored_nets.back(), encoding, horizon);
            flows = detail::compute_flows(mu0s, last, model, config, rng);
        }
        if (average_flows.empty()) {
            average_flows = flows;
        } else {
            const double w_old = static_cast<double>(k - 1) / k;
            const double w_new = 1.0 / k;
            for (std::size_t d = 0; d < flows.size(); ++d) {
                for (int n = 0; n <= horizon; ++n) {
                    std::vector<double> mixed(
                        static_cast<std::size_t>(model.state_space().size()));
                    for (int x = 0; x < model.state_space().size(); ++x)
                        mixed[static_cast<std::size_t>(x)] =
                            w_old * average_flows[d].at(n)[x] + w_new * flows[d].at(n)[x];
                    average_flows[d].steps[static_cast<std::size_t>(n)] =
                        Distribution(std::move(mixed));
                }
            }
        }

        // Fresh DQN best response against the averaged flows.
        neural::MlpParams online = neural::MlpParams::he_uniform(dims, rng);
        neural::MlpParams target = online;
        neural::AdamState adam =
            neural::AdamState::init(online, {.learning_rate = config.learning_rate});
        buffer.clear();
        ++result.buffer_clears;

        detail::LossTracker losses;
        int env_steps = 0;
        int gradient_updates = 0;

        auto choose_action = [&](const std::vector<double>& obs, double eps, Rng& r) {
            neural::mlp_forward(online, obs, qscratch);
            return epsilon_greedy(qscratch, eps, r);
        };
        auto make_targets = [&](const std::vector<const Transition*>& batch) {
            return dqn_targets(batch, target, config.gamma);
        };

        detail::run_training_phase(model, average_flows, config, encoding, online, target,
                                   adam, buffer, rng, choose_action, make_targets, losses,
                                   env_steps, gradient_updates, result.total_target_syncs);

        result.stored_nets.push_back(std::move(online));
        if (hooks.on_checkpoint) hooks.on_checkpoint(k, result.stored_nets.back());

        IterationMetrics m;
        m.iteration = k;
        const FpMixturePolicy mixture(result.stored_nets, encoding, horizon);
        for (const auto& mu0 : mu0s)
            m.per_mu0_exploitability.push_back(exact::exploitability(mixture, mu0, model));
        double total = 0.0;
        for (double e : m.per_mu0_exploitability) total += e;
        m.mean_exploitability = total / static_cast<double>(mu0s.size());
        m.loss_mean = losses.mean();
        m.loss_max = losses.max;
        m.env_steps = env_steps;
        m.gradient_updates = gradient_updates;
        m.stored_params =
            static_cast<std::int64_t>(result.stored_nets.size()) *
            result.stored_nets.back().parameter_count();
        m.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.metrics.push_back(std::move(m));
    }
    return result;
}

}  // namespace mfg::deep
