#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "mfg/math.hpp"

namespace mfg::neural {

// Probability floor inside policy log terms; keeps Munchausen targets finite.
inline constexpr double kPolicyProbFloor = 1e-6;

/// softmax(q / tau), numerically stable.
inline void softmax_policy(std::span<const double> qvals, double tau, std::span<double> out) {
    if (tau <= 0.0) throw std::invalid_argument("softmax_policy: tau must be positive");
    if (qvals.size() != out.size()) throw std::invalid_argument("softmax_policy: bad shapes");
    for (std::size_t i = 0; i < qvals.size(); ++i) {
        if (!std::isfinite(qvals[i]))
            throw std::invalid_argument("softmax_policy: non-finite q-value");
        out[i] = qvals[i] / tau;
    }
    softmax(out, out);
}

/// log(max(pi(a), 1e-6)); bounded in [log(1e-6), 0].
inline double clipped_log_prob(std::span<const double> pi, int action) {
    if (action < 0 || action >= static_cast<int>(pi.size()))
        throw std::invalid_argument("clipped_log_prob: action out of range");
    const double p = pi[static_cast<std::size_t>(action)];
    return std::log(p > kPolicyProbFloor ? (p < 1.0 ? p : 1.0) : kPolicyProbFloor);
}

}  // namespace mfg::neural
