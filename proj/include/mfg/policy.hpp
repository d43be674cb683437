#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfg/distribution.hpp"

namespace mfg {

// Anything that can evaluate pi_n(.|x, mu) qualifies as a policy. Master
// policies read mu; population-independent ones ignore it.
template <typename P>
concept ActionPolicy = requires(const P& p, int n, int x, const Distribution& mu,
                                std::span<double> out) {
    p.action_distribution(n, x, mu, out);
};

/// Time-indexed exact policy table, probs[n][x][a].
class TabularPolicy {
public:
    TabularPolicy() = default;

    TabularPolicy(int horizon, int num_states, int num_actions)
        : horizon_(horizon), num_states_(num_states), num_actions_(num_actions),
          probs_(static_cast<std::size_t>(horizon + 1) * num_states * num_actions, 0.0) {
        if (horizon < 0 || num_states <= 0 || num_actions <= 0)
            throw std::invalid_argument("TabularPolicy: bad shape");
    }

    static TabularPolicy uniform(int horizon, int num_states, int num_actions) {
        TabularPolicy p(horizon, num_states, num_actions);
        const double u = 1.0 / num_actions;
        for (double& v : p.probs_) v = u;
        return p;
    }

    int horizon() const { return horizon_; }
    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }

    std::span<double> row(int n, int x) {
        return {probs_.data() + offset(n, x), static_cast<std::size_t>(num_actions_)};
    }
    std::span<const double> row(int n, int x) const {
        return {probs_.data() + offset(n, x), static_cast<std::size_t>(num_actions_)};
    }

    double prob(int n, int x, int a) const {
        return probs_[offset(n, x) + static_cast<std::size_t>(a)];
    }

    void action_distribution(int n, int x, const Distribution&, std::span<double> out) const {
        auto r = row(n, x);
        if (out.size() != r.size()) throw std::invalid_argument("TabularPolicy: bad out size");
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i];
    }

    // Every row must be a probability vector.
    void validate() const {
        for (int n = 0; n <= horizon_; ++n) {
            for (int x = 0; x < num_states_; ++x) {
                double s = 0.0;
                for (double v : row(n, x)) {
                    if (v < 0.0) throw std::invalid_argument("TabularPolicy: negative prob");
                    s += v;
                }
                if (std::abs(s - 1.0) > kMassTolerance)
                    throw std::invalid_argument("TabularPolicy: row does not sum to 1");
            }
        }
    }

    bool operator==(const TabularPolicy&) const = default;

private:
    std::size_t offset(int n, int x) const {
        return (static_cast<std::size_t>(n) * num_states_ + x) * num_actions_;
    }

    int horizon_ = 0;
    int num_states_ = 0;
    int num_actions_ = 0;
    std::vector<double> probs_;
};

/// Uniform action choice at every (n, x, mu).
class UniformPolicy {
public:
    explicit UniformPolicy(int num_actions) : num_actions_(num_actions) {}

    void action_distribution(int, int, const Distribution&, std::span<double> out) const {
        const double u = 1.0 / num_actions_;
        for (auto& v : out) v = u;
    }

private:
    int num_actions_ = 1;
};

/// Type-erased policy handle for runtime dispatch in the harness.
class AnyPolicy {
public:
    AnyPolicy() = default;

    template <ActionPolicy P>
    AnyPolicy(P policy)  // NOLINT: implicit wrap is the point
        : fn_([p = std::move(policy)](int n, int x, const Distribution& mu,
                                      std::span<double> out) {
              p.action_distribution(n, x, mu, out);
          }) {}

    void action_distribution(int n, int x, const Distribution& mu,
                             std::span<double> out) const {
        fn_(n, x, mu, out);
    }

private:
    std::function<void(int, int, const Distribution&, std::span<double>)> fn_;
};

}  // namespace mfg
