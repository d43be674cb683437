#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace mfg {

struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

/// Finite state space: a 2D grid with optional blocked cells, or a 1D chain.
/// Non-wall cells get dense indices in [0, size), row-major for grids.
class StateSpace {
public:
    enum class Kind { grid2d, chain1d };

    static StateSpace grid(int width, int height, const std::vector<Cell>& walls = {}) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("StateSpace: grid dimensions must be positive");
        StateSpace s;
        s.kind_ = Kind::grid2d;
        s.width_ = width;
        s.height_ = height;
        s.wall_.assign(static_cast<std::size_t>(width) * height, 0);
        for (const Cell& c : walls) {
            if (c.x < 0 || c.x >= width || c.y < 0 || c.y >= height)
                throw std::invalid_argument("StateSpace: wall outside grid");
            s.wall_[static_cast<std::size_t>(c.y) * width + c.x] = 1;
        }
        s.index_.assign(s.wall_.size(), -1);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const std::size_t flat = static_cast<std::size_t>(y) * width + x;
                if (!s.wall_[flat]) {
                    s.index_[flat] = static_cast<int>(s.cells_.size());
                    s.cells_.push_back({x, y});
                }
            }
        }
        if (s.cells_.empty()) throw std::invalid_argument("StateSpace: all cells are walls");
        return s;
    }

    static StateSpace chain(int length) {
        if (length <= 0) throw std::invalid_argument("StateSpace: chain length must be positive");
        StateSpace s;
        s.kind_ = Kind::chain1d;
        s.width_ = length;
        s.height_ = 1;
        for (int x = 0; x < length; ++x) s.cells_.push_back({x, 0});
        return s;
    }

    Kind kind() const { return kind_; }
    int size() const { return static_cast<int>(cells_.size()); }
    int width() const { return width_; }
    int height() const { return height_; }
    int length() const { return width_; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    bool is_wall(int x, int y) const {
        if (!in_bounds(x, y)) return false;
        if (kind_ == Kind::chain1d) return false;
        return wall_[static_cast<std::size_t>(y) * width_ + x] != 0;
    }

    // Dense index of a cell, or -1 for walls and out-of-bounds positions.
    int index_of(int x, int y) const {
        if (!in_bounds(x, y)) return -1;
        if (kind_ == Kind::chain1d) return x;
        return index_[static_cast<std::size_t>(y) * width_ + x];
    }

    const Cell& cell_at(int index) const { return cells_[static_cast<std::size_t>(index)]; }

    bool valid_state(int index) const { return index >= 0 && index < size(); }

private:
    Kind kind_ = Kind::chain1d;
    int width_ = 0;
    int height_ = 0;
    std::vector<unsigned char> wall_;
    std::vector<int> index_;  // flat cell -> dense state index
    std::vector<Cell> cells_;
};

struct ActionDescriptor {
    int dx = 0;
    int dy = 0;
    int move = 0;       // signed shift for chain moves
    double magnitude = 0.0;
};

/// Ordered action set. Grids use {up, down, left, right, stay}; chains use
/// integer shifts {-M, ..., M}.
class ActionSpace {
public:
    static ActionSpace grid_moves() {
        ActionSpace a;
        a.actions_ = {
            {0, -1, 0, 1.0},  // up
            {0, 1, 0, 1.0},   // down
            {-1, 0, 0, 1.0},  // left
            {1, 0, 0, 1.0},   // right
            {0, 0, 0, 0.0},   // stay
        };
        return a;
    }

    // Abstract action set with no displacement semantics, for generic
    // finite-MDP models.
    static ActionSpace enumerated(int count) {
        if (count <= 0) throw std::invalid_argument("ActionSpace: need at least one action");
        ActionSpace a;
        a.actions_.resize(static_cast<std::size_t>(count));
        return a;
    }

    static ActionSpace integer_moves(int max_magnitude) {
        if (max_magnitude < 0) throw std::invalid_argument("ActionSpace: negative magnitude");
        ActionSpace a;
        for (int m = -max_magnitude; m <= max_magnitude; ++m)
            a.actions_.push_back({0, 0, m, static_cast<double>(std::abs(m))});
        return a;
    }

    int size() const { return static_cast<int>(actions_.size()); }
    const ActionDescriptor& action(int a) const { return actions_[static_cast<std::size_t>(a)]; }
    bool valid_action(int a) const { return a >= 0 && a < size(); }

private:
    std::vector<ActionDescriptor> actions_;
};

}  // namespace mfg
