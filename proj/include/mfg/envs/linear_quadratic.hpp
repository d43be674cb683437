#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfg/env_model.hpp"

namespace mfg::envs {

/// Discretized linear-quadratic model on the chain {-L, ..., L}. Dynamics
/// x' = x + a*dt + sigma*eps*sqrt(dt) with eps drawn from a standard normal
/// discretized over {-3sigma, ..., 3sigma}; outcomes round half away from
/// zero and clamp to the chain ends.
struct LQSpec {
    int half_width = 20;  // L; states -L..L
    int max_move = 3;     // M; actions -M..M
    double sigma = 1.0;
    double dt = 1.0;
    double q = 0.01;
    double kappa = 0.5;
    double c_term = 1.0;
    int horizon = 30;
};

class LinearQuadraticEnv final : public EnvModel {
public:
    explicit LinearQuadraticEnv(LQSpec spec)
        : EnvModel(StateSpace::chain(2 * spec.half_width + 1),
                   ActionSpace::integer_moves(spec.max_move), spec.horizon),
          spec_(std::move(spec)) {
        if (spec_.half_width <= 0 || spec_.sigma <= 0.0 || spec_.dt <= 0.0)
            throw std::invalid_argument("LinearQuadraticEnv: bad spec");
        build_transitions();
    }

    const LQSpec& spec() const { return spec_; }
    bool has_terminal_reward() const override { return true; }

    int position_of(int state) const { return state - spec_.half_width; }
    int state_of_position(int pos) const { return pos + spec_.half_width; }

    double population_mean(const Distribution& mu) const {
        double m = 0.0;
        for (int s = 0; s < mu.size(); ++s) m += position_of(s) * mu[s];
        return m;
    }

    const SparseTransition& transition(int, int x, int a, const Distribution&) const override {
        check_state_action(x, a);
        return table_[static_cast<std::size_t>(x) * action_space().size() + a];
    }

    // Running reward [-|a|^2/2 + q a (m - x) - kappa (m - x)^2 / 2] dt, with m
    // the first moment of mu; at the horizon the terminal cost
    // -c_term (m - x)^2 / 2 applies and the action is ignored.
    double reward(int n, int x, int a, const Distribution& mu) const override {
        check_state_action(x, a);
        const double m = population_mean(mu);
        const double gap = m - position_of(x);
        if (n >= horizon()) return -0.5 * spec_.c_term * gap * gap;
        const double move = action_space().action(a).move;
        return (-0.5 * move * move + spec_.q * move * gap - 0.5 * spec_.kappa * gap * gap) *
               spec_.dt;
    }

    // Normalized standard-normal weights over the discretized noise support.
    std::vector<double> noise_weights() const {
        const int kmax = noise_half_support();
        std::vector<double> w;
        double total = 0.0;
        for (int k = -kmax; k <= kmax; ++k) {
            w.push_back(std::exp(-0.5 * k * k));
            total += w.back();
        }
        for (double& v : w) v /= total;
        return w;
    }

private:
    int noise_half_support() const {
        return static_cast<int>(std::llround(3.0 * spec_.sigma));
    }

    void build_transitions() {
        const int kmax = noise_half_support();
        const std::vector<double> weights = noise_weights();
        const double root_dt = std::sqrt(spec_.dt);
        const int size = state_space().size();
        table_.resize(static_cast<std::size_t>(size) * action_space().size());
        std::vector<double> dense(static_cast<std::size_t>(size));
        for (int x = 0; x < size; ++x) {
            for (int a = 0; a < action_space().size(); ++a) {
                for (double& v : dense) v = 0.0;
                const double base =
                    position_of(x) + action_space().action(a).move * spec_.dt;
                for (int k = -kmax; k <= kmax; ++k) {
                    const double raw = base + spec_.sigma * k * root_dt;
                    int pos = static_cast<int>(std::round(raw));  // half away from zero
                    pos = std::clamp(pos, -spec_.half_width, spec_.half_width);
                    dense[static_cast<std::size_t>(state_of_position(pos))] +=
                        weights[static_cast<std::size_t>(k + kmax)];
                }
                SparseTransition& out =
                    table_[static_cast<std::size_t>(x) * action_space().size() + a];
                for (int s = 0; s < size; ++s)
                    if (dense[static_cast<std::size_t>(s)] > 0.0)
                        out.push_back({s, dense[static_cast<std::size_t>(s)]});
            }
        }
    }

    LQSpec spec_;
    std::vector<SparseTransition> table_;
};

}  // namespace mfg::envs
