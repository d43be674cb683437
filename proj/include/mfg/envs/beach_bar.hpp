#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <utility>

#include "mfg/envs/exploration.hpp"

namespace mfg::envs {

/// Beach bar: same walled-grid dynamics as exploration, reward pulls agents
/// toward the central bar while penalizing movement and crowding. The 1D
/// variant is a 1-row grid; its optional closing time zeroes the attraction
/// term from that step on.
struct BeachBarSpec {
    int width = 11;
    int height = 11;                    // 1 for the 1D beach
    std::optional<int> closing_time;    // 1D variant uses n = 20
    double stay_noise = 0.9;
    double drift_noise = 0.025;
    int horizon = 30;

    static BeachBarSpec line(int length, std::optional<int> closing = std::nullopt,
                             int horizon = 30) {
        BeachBarSpec s;
        s.width = length;
        s.height = 1;
        s.closing_time = closing;
        s.horizon = horizon;
        return s;
    }
};

class BeachBarEnv final : public EnvModel {
public:
    explicit BeachBarEnv(BeachBarSpec spec)
        : EnvModel(StateSpace::grid(spec.width, spec.height), ActionSpace::grid_moves(),
                   spec.horizon),
          spec_(std::move(spec)), bar_{spec_.width / 2, spec_.height / 2} {
        if (spec_.closing_time && *spec_.closing_time >= spec_.horizon)
            throw std::invalid_argument("BeachBarEnv: closing time must precede the horizon");
        table_ = detail::build_grid_transitions(state_space(), action_space(),
                                                spec_.stay_noise, spec_.drift_noise);
    }

    const BeachBarSpec& spec() const { return spec_; }
    Cell bar_position() const { return bar_; }

    const SparseTransition& transition(int, int x, int a, const Distribution&) const override {
        check_state_action(x, a);
        return table_[static_cast<std::size_t>(x) * action_space().size() + a];
    }

    // r = d_bar(x) - |a|/|X| - log(mu(x)), with d_bar = -L1(x, bar)/|X| so that
    // proximity to the bar pays. After closing time only crowd aversion remains.
    double reward(int n, int x, int a, const Distribution& mu) const override {
        check_state_action(x, a);
        const Cell c = state_space().cell_at(x);
        double attraction = 0.0;
        if (!spec_.closing_time || n < *spec_.closing_time) {
            const double dist = std::abs(c.x - bar_.x) + std::abs(c.y - bar_.y);
            attraction = -dist / state_space().size();
        }
        const double crowd = std::log(std::max(mu[x], kCrowdLogFloor));
        return attraction - action_space().action(a).magnitude / state_space().size() - crowd;
    }

private:
    BeachBarSpec spec_;
    Cell bar_;
    std::vector<SparseTransition> table_;
};

}  // namespace mfg::envs
