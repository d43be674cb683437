#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mfg {

/// Time-indexed exact value table, values[n][x][a] for n = 0..N_T.
class TabularQ {
public:
    TabularQ() = default;

    TabularQ(int horizon, int num_states, int num_actions, double init = 0.0)
        : horizon_(horizon), num_states_(num_states), num_actions_(num_actions),
          values_(static_cast<std::size_t>(horizon + 1) * num_states * num_actions, init) {
        if (horizon < 0 || num_states <= 0 || num_actions <= 0)
            throw std::invalid_argument("TabularQ: bad shape");
    }

    int horizon() const { return horizon_; }
    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }

    double& at(int n, int x, int a) { return values_[offset(n, x) + static_cast<std::size_t>(a)]; }
    double at(int n, int x, int a) const {
        return values_[offset(n, x) + static_cast<std::size_t>(a)];
    }

    std::span<double> row(int n, int x) {
        return {values_.data() + offset(n, x), static_cast<std::size_t>(num_actions_)};
    }
    std::span<const double> row(int n, int x) const {
        return {values_.data() + offset(n, x), static_cast<std::size_t>(num_actions_)};
    }

    bool same_shape(const TabularQ& other) const {
        return horizon_ == other.horizon_ && num_states_ == other.num_states_ &&
               num_actions_ == other.num_actions_;
    }

private:
    std::size_t offset(int n, int x) const {
        return (static_cast<std::size_t>(n) * num_states_ + x) * num_actions_;
    }

    int horizon_ = 0;
    int num_states_ = 0;
    int num_actions_ = 0;
    std::vector<double> values_;
};

}  // namespace mfg
