#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfg/rng.hpp"

namespace mfg {

// Tolerance on |sum - 1| accepted when constructing a Distribution. Mass
// conservation of single propagation steps is much tighter (see tests); the
// looser gate here leaves headroom for long flows and mixed inputs.
inline constexpr double kMassTolerance = 1e-9;

/// Histogram over a finite state space; the mean-field state.
class Distribution {
public:
    Distribution() = default;

    explicit Distribution(std::vector<double> mass) : mass_(std::move(mass)) {
        validate();
    }

    static Distribution uniform(int size) {
        if (size <= 0) throw std::invalid_argument("Distribution: size must be positive");
        return Distribution(std::vector<double>(static_cast<std::size_t>(size), 1.0 / size));
    }

    static Distribution dirac(int size, int state) {
        if (size <= 0 || state < 0 || state >= size)
            throw std::invalid_argument("Distribution: dirac state out of range");
        std::vector<double> m(static_cast<std::size_t>(size), 0.0);
        m[static_cast<std::size_t>(state)] = 1.0;
        return Distribution(std::move(m));
    }

    static Distribution from_unnormalized(std::vector<double> weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0 || !std::isfinite(w))
                throw std::invalid_argument("Distribution: negative or non-finite weight");
            total += w;
        }
        if (total <= 0.0) throw std::invalid_argument("Distribution: zero total weight");
        for (double& w : weights) w /= total;
        return Distribution(std::move(weights));
    }

    int size() const { return static_cast<int>(mass_.size()); }
    double operator[](int i) const { return mass_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& mass() const { return mass_; }
    std::span<const double> span() const { return mass_; }

    double sum() const {
        double s = 0.0;
        for (double m : mass_) s += m;
        return s;
    }

    int sample(Rng& rng) const { return sample_index(mass_, rng); }

    bool operator==(const Distribution& other) const = default;

private:
    void validate() const {
        if (mass_.empty()) throw std::invalid_argument("Distribution: empty mass vector");
        double s = 0.0;
        for (double m : mass_) {
            if (!(m >= 0.0) || !std::isfinite(m))
                throw std::invalid_argument("Distribution: entries must be finite and >= 0");
            s += m;
        }
        if (std::abs(s - 1.0) > kMassTolerance)
            throw std::invalid_argument("Distribution: mass sums to " + std::to_string(s));
    }

    std::vector<double> mass_;
};

/// Weighted renormalized mixture, (w_a*mu_a + w_b*mu_b) / (w_a + w_b).
inline Distribution mix_distributions(const Distribution& mu_a, double w_a,
                                      const Distribution& mu_b, double w_b) {
    if (mu_a.size() != mu_b.size())
        throw std::invalid_argument("mix_distributions: size mismatch");
    if (w_a < 0.0 || w_b < 0.0)
        throw std::invalid_argument("mix_distributions: negative weight");
    const double total = w_a + w_b;
    if (total <= 0.0) throw std::invalid_argument("mix_distributions: both weights zero");
    std::vector<double> m(static_cast<std::size_t>(mu_a.size()));
    for (int i = 0; i < mu_a.size(); ++i)
        m[static_cast<std::size_t>(i)] = (w_a * mu_a[i] + w_b * mu_b[i]) / total;
    return Distribution(std::move(m));
}

inline double entropy(const Distribution& mu) {
    double h = 0.0;
    for (int i = 0; i < mu.size(); ++i)
        if (mu[i] > 0.0) h -= mu[i] * std::log(mu[i]);
    return h;
}

inline double l1_distance_to_uniform(const Distribution& mu) {
    const double u = 1.0 / mu.size();
    double d = 0.0;
    for (int i = 0; i < mu.size(); ++i) d += std::abs(mu[i] - u);
    return d;
}

}  // namespace mfg
