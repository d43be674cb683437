#pragma once

#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfg/env_model.hpp"

namespace mfg::envs {

// Floor inside log(mu(x)) so exact DP can evaluate rewards at zero-mass states.
inline constexpr double kCrowdLogFloor = 1e-10;

/// Crowd-aversion grid exploration. Dynamics x' = x + a + noise with the
/// perturbation keeping the agent in place w.p. 0.9 and drifting one cardinal
/// step w.p. 0.025 each; blocked moves fold back to the pre-move cell.
struct ExplorationSpec {
    int width = 11;
    int height = 11;
    std::vector<Cell> walls;  // empty for the one-room variant
    double stay_noise = 0.9;
    double drift_noise = 0.025;
    int horizon = 30;
};

/// Interior wall layout of the four-rooms map: a cross at the middle row and
/// column with one centered door per wall segment.
inline std::vector<Cell> build_four_rooms(int width, int height) {
    if (width < 7 || height < 7 || width % 2 == 0 || height % 2 == 0)
        throw std::invalid_argument("build_four_rooms: dimensions must be odd and >= 7");
    const int mx = width / 2;
    const int my = height / 2;
    const int door_left = (mx - 1) / 2;
    const int door_right = mx + 1 + (width - mx - 2) / 2;
    const int door_top = (my - 1) / 2;
    const int door_bottom = my + 1 + (height - my - 2) / 2;

    std::vector<Cell> walls;
    for (int x = 0; x < width; ++x)
        if (x != door_left && x != door_right) walls.push_back({x, my});
    for (int y = 0; y < height; ++y)
        if (y != door_top && y != door_bottom && y != my) walls.push_back({mx, y});
    return walls;
}

/// True when every free cell is reachable from every other (4-neighborhood).
inline bool connected_free_cells(const StateSpace& space) {
    if (space.size() == 0) return false;
    std::vector<char> seen(static_cast<std::size_t>(space.size()), 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int visited = 1;
    const int dx[] = {0, 0, -1, 1};
    const int dy[] = {-1, 1, 0, 0};
    while (!frontier.empty()) {
        const Cell c = space.cell_at(frontier.front());
        frontier.pop();
        for (int d = 0; d < 4; ++d) {
            const int ni = space.index_of(c.x + dx[d], c.y + dy[d]);
            if (ni >= 0 && !seen[static_cast<std::size_t>(ni)]) {
                seen[static_cast<std::size_t>(ni)] = 1;
                frontier.push(ni);
                ++visited;
            }
        }
    }
    return visited == space.size();
}

namespace detail {

// Shared two-stage grid kernel: apply the action, then the noise; any move
// into a wall or off the grid leaves the agent at its pre-move position.
inline std::vector<SparseTransition> build_grid_transitions(const StateSpace& space,
                                                            const ActionSpace& actions,
                                                            double stay_noise,
                                                            double drift_noise) {
    const int ndx[] = {0, 0, 0, -1, 1};
    const int ndy[] = {0, -1, 1, 0, 0};
    const double nprob[] = {stay_noise, drift_noise, drift_noise, drift_noise, drift_noise};

    std::vector<SparseTransition> table(
        static_cast<std::size_t>(space.size()) * actions.size());
    std::vector<double> dense(static_cast<std::size_t>(space.size()));
    for (int x = 0; x < space.size(); ++x) {
        const Cell from = space.cell_at(x);
        for (int a = 0; a < actions.size(); ++a) {
            const auto& act = actions.action(a);
            Cell moved{from.x + act.dx, from.y + act.dy};
            if (space.index_of(moved.x, moved.y) < 0) moved = from;

            for (double& v : dense) v = 0.0;
            for (int k = 0; k < 5; ++k) {
                Cell landed{moved.x + ndx[k], moved.y + ndy[k]};
                int idx = space.index_of(landed.x, landed.y);
                if (idx < 0) idx = space.index_of(moved.x, moved.y);
                dense[static_cast<std::size_t>(idx)] += nprob[k];
            }
            SparseTransition& out = table[static_cast<std::size_t>(x) * actions.size() + a];
            for (int s = 0; s < space.size(); ++s)
                if (dense[static_cast<std::size_t>(s)] > 0.0)
                    out.push_back({s, dense[static_cast<std::size_t>(s)]});
        }
    }
    return table;
}

}  // namespace detail

class ExplorationEnv final : public EnvModel {
public:
    explicit ExplorationEnv(ExplorationSpec spec)
        : EnvModel(StateSpace::grid(spec.width, spec.height, spec.walls),
                   ActionSpace::grid_moves(), spec.horizon),
          spec_(std::move(spec)) {
        if (std::abs(spec_.stay_noise + 4.0 * spec_.drift_noise - 1.0) > 1e-12)
            throw std::invalid_argument("ExplorationEnv: noise probabilities must sum to 1");
        if (!connected_free_cells(state_space()))
            throw std::invalid_argument("ExplorationEnv: free cells are not connected");
        table_ = detail::build_grid_transitions(state_space(), action_space(),
                                                spec_.stay_noise, spec_.drift_noise);
    }

    const ExplorationSpec& spec() const { return spec_; }

    const SparseTransition& transition(int, int x, int a, const Distribution&) const override {
        check_state_action(x, a);
        return table_[static_cast<std::size_t>(x) * action_space().size() + a];
    }

    // r = -log(mu(x)) - |a| / |X|
    double reward(int, int x, int a, const Distribution& mu) const override {
        check_state_action(x, a);
        const double crowd = std::log(std::max(mu[x], kCrowdLogFloor));
        return -crowd - action_space().action(a).magnitude / state_space().size();
    }

private:
    ExplorationSpec spec_;
    std::vector<SparseTransition> table_;
};

}  // namespace mfg::envs
