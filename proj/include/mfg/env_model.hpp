#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "mfg/distribution.hpp"
#include "mfg/state_space.hpp"

namespace mfg {

struct TransitionOutcome {
    int state = 0;
    double prob = 0.0;
};

// Support of p(. | x, a, mu): outcomes with positive probability, summing to 1.
using SparseTransition = std::vector<TransitionOutcome>;

inline Distribution to_distribution(const SparseTransition& sparse, int num_states) {
    std::vector<double> m(static_cast<std::size_t>(num_states), 0.0);
    for (const auto& o : sparse) m[static_cast<std::size_t>(o.state)] += o.prob;
    return Distribution(std::move(m));
}

inline int sample_outcome(const SparseTransition& sparse, Rng& rng) {
    if (sparse.empty()) throw std::invalid_argument("sample_outcome: empty support");
    const double u = uniform01(rng);
    double acc = 0.0;
    for (const auto& o : sparse) {
        acc += o.prob;
        if (u < acc) return o.state;
    }
    return sparse.back().state;
}

/// Finite-horizon mean-field model: state/action spaces, horizon, transition
/// kernel p_n(x'|x,a,mu) and reward r_n(x,a,mu). The kernel signature admits
/// population-dependent transitions; the bundled benchmarks ignore mu there.
class EnvModel {
public:
    virtual ~EnvModel() = default;

    const StateSpace& state_space() const { return states_; }
    const ActionSpace& action_space() const { return actions_; }
    int horizon() const { return horizon_; }

    virtual bool has_terminal_reward() const { return false; }

    virtual const SparseTransition& transition(int n, int x, int a,
                                               const Distribution& mu) const = 0;
    virtual double reward(int n, int x, int a, const Distribution& mu) const = 0;

protected:
    EnvModel(StateSpace states, ActionSpace actions, int horizon)
        : states_(std::move(states)), actions_(std::move(actions)), horizon_(horizon) {
        if (horizon_ < 0) throw std::invalid_argument("EnvModel: negative horizon");
    }

    void check_state_action(int x, int a) const {
        if (!states_.valid_state(x)) throw std::invalid_argument("EnvModel: invalid state");
        if (!actions_.valid_action(a)) throw std::invalid_argument("EnvModel: invalid action");
    }

private:
    StateSpace states_;
    ActionSpace actions_;
    int horizon_ = 0;
};

}  // namespace mfg
