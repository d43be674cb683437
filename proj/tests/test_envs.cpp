#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "mfg/envs/beach_bar.hpp"
#include "mfg/envs/exploration.hpp"
#include "mfg/envs/linear_quadratic.hpp"

using namespace mfg;
using namespace mfg::envs;

namespace {

ExplorationEnv make_exploration(int w, int h, int horizon = 10) {
    ExplorationSpec spec;
    spec.width = w;
    spec.height = h;
    spec.horizon = horizon;
    return ExplorationEnv(spec);
}

double sparse_prob_at(const SparseTransition& t, int state) {
    double p = 0.0;
    for (const auto& o : t)
        if (o.state == state) p += o.prob;
    return p;
}

}  // namespace

TEST_CASE("exploration transition noise model", "[envs]") {
    const auto env = make_exploration(11, 11);
    const auto& space = env.state_space();
    const auto mu = Distribution::uniform(space.size());
    const int stay = 4;

    SECTION("interior cell, stay: 0.9 in place and 0.025 per neighbor") {
        const int x = space.index_of(5, 5);
        const auto& t = env.transition(0, x, stay, mu);
        CHECK(sparse_prob_at(t, x) == Catch::Approx(0.9));
        CHECK(sparse_prob_at(t, space.index_of(5, 4)) == Catch::Approx(0.025));
        CHECK(sparse_prob_at(t, space.index_of(5, 6)) == Catch::Approx(0.025));
        CHECK(sparse_prob_at(t, space.index_of(4, 5)) == Catch::Approx(0.025));
        CHECK(sparse_prob_at(t, space.index_of(6, 5)) == Catch::Approx(0.025));
    }
    SECTION("corner cell, stay: blocked noise folds back") {
        const int x = space.index_of(0, 0);
        const auto& t = env.transition(0, x, stay, mu);
        CHECK(sparse_prob_at(t, x) == Catch::Approx(0.95));
        CHECK(sparse_prob_at(t, space.index_of(1, 0)) == Catch::Approx(0.025));
        CHECK(sparse_prob_at(t, space.index_of(0, 1)) == Catch::Approx(0.025));
    }
    SECTION("every (x, a) row sums to 1") {
        for (int x = 0; x < space.size(); ++x) {
            for (int a = 0; a < 5; ++a) {
                double s = 0.0;
                for (const auto& o : env.transition(0, x, a, mu)) s += o.prob;
                CHECK(std::abs(s - 1.0) <= 1e-12);
            }
        }
    }
    SECTION("invalid state or action rejected") {
        CHECK_THROWS_AS(env.transition(0, -1, stay, mu), std::invalid_argument);
        CHECK_THROWS_AS(env.transition(0, 0, 5, mu), std::invalid_argument);
    }
}

TEST_CASE("exploration reward values", "[envs]") {
    const auto env = make_exploration(11, 11);
    const int n_states = env.state_space().size();
    REQUIRE(n_states == 121);
    const auto uniform = Distribution::uniform(n_states);
    const int stay = 4;
    const int up = 0;

    CHECK(env.reward(0, 0, stay, uniform) == Catch::Approx(std::log(121.0)));
    CHECK(env.reward(0, 0, stay, uniform) == Catch::Approx(4.795791).epsilon(1e-6));
    CHECK(env.reward(0, 0, up, uniform) ==
          Catch::Approx(std::log(121.0) - 1.0 / 121.0).epsilon(1e-12));
    CHECK(env.reward(0, 0, up, uniform) == Catch::Approx(4.787525).epsilon(1e-6));

    const auto point = Distribution::dirac(n_states, 7);
    CHECK(env.reward(0, 7, stay, point) == Catch::Approx(0.0).margin(1e-15));

    SECTION("strictly decreasing in mu(x) above the floor") {
        double prev = env.reward(0, 3, stay, Distribution::from_unnormalized([&] {
            std::vector<double> w(static_cast<std::size_t>(n_states), 1.0);
            w[3] = 0.01;
            return w;
        }()));
        for (double mass : {0.1, 1.0, 10.0, 100.0}) {
            std::vector<double> w(static_cast<std::size_t>(n_states), 1.0);
            w[3] = mass;
            const double r = env.reward(0, 3, stay, Distribution::from_unnormalized(w));
            CHECK(r < prev);
            prev = r;
        }
    }
    SECTION("zero-mass state stays finite via the floor") {
        const auto d = Distribution::dirac(n_states, 0);
        CHECK(std::isfinite(env.reward(0, 5, stay, d)));
        CHECK(env.reward(0, 5, stay, d) == Catch::Approx(-std::log(1e-10)));
    }
}

TEST_CASE("four rooms layout", "[envs]") {
    SECTION("11x11 partitions into four connected rooms") {
        const auto walls = build_four_rooms(11, 11);
        ExplorationSpec spec;
        spec.width = 11;
        spec.height = 11;
        spec.walls = walls;
        const ExplorationEnv env(spec);  // would throw if disconnected
        CHECK(env.state_space().size() == 121 - static_cast<int>(walls.size()));
        // walls have no dense index
        for (const auto& w : walls) CHECK(env.state_space().index_of(w.x, w.y) == -1);
        CHECK(connected_free_cells(env.state_space()));
    }
    SECTION("25x25 map-size variant is valid") {
        const auto walls = build_four_rooms(25, 25);
        ExplorationSpec spec;
        spec.width = 25;
        spec.height = 25;
        spec.walls = walls;
        const ExplorationEnv env(spec);
        CHECK(connected_free_cells(env.state_space()));
    }
    SECTION("dimensions must be odd and at least 7") {
        CHECK_THROWS_AS(build_four_rooms(5, 11), std::invalid_argument);
        CHECK_THROWS_AS(build_four_rooms(8, 11), std::invalid_argument);
    }
}

TEST_CASE("beach bar reward", "[envs]") {
    const BeachBarEnv env(BeachBarSpec::line(11, 20, 30));
    REQUIRE(env.state_space().size() == 11);
    REQUIRE(env.bar_position().x == 5);
    const auto uniform = Distribution::uniform(11);
    const int stay = 4;

    CHECK(env.reward(0, 5, stay, uniform) == Catch::Approx(std::log(11.0)).epsilon(1e-12));
    CHECK(env.reward(0, 5, stay, uniform) == Catch::Approx(2.397895).epsilon(1e-6));
    CHECK(env.reward(0, 0, stay, uniform) ==
          Catch::Approx(-5.0 / 11.0 + std::log(11.0)).epsilon(1e-12));
    CHECK(env.reward(0, 0, stay, uniform) == Catch::Approx(1.943350).epsilon(1e-6));

    SECTION("after closing, reward is pure crowd aversion") {
        ExplorationSpec ref_spec;
        ref_spec.width = 11;
        ref_spec.height = 1;
        ref_spec.horizon = 30;
        const ExplorationEnv crowd_only(ref_spec);
        for (int x : {0, 3, 5, 10})
            for (int a = 0; a < 5; ++a)
                CHECK(env.reward(20, x, a, uniform) ==
                      Catch::Approx(crowd_only.reward(20, x, a, uniform)));
        // independent of bar position for n >= closing
        CHECK(env.reward(25, 0, stay, uniform) == env.reward(25, 10, stay, uniform));
    }
    SECTION("closing time must precede the horizon") {
        CHECK_THROWS_AS(BeachBarEnv(BeachBarSpec::line(11, 30, 30)), std::invalid_argument);
    }
    SECTION("2d variant has the bar at the center") {
        BeachBarSpec spec;
        spec.width = 11;
        spec.height = 11;
        const BeachBarEnv env2(spec);
        CHECK(env2.bar_position().x == 5);
        CHECK(env2.bar_position().y == 5);
        const auto u2 = Distribution::uniform(121);
        const int center = env2.state_space().index_of(5, 5);
        const int corner = env2.state_space().index_of(0, 0);
        CHECK(env2.reward(0, center, stay, u2) - env2.reward(0, corner, stay, u2) ==
              Catch::Approx(10.0 / 121.0));
    }
}

TEST_CASE("linear quadratic noise discretization", "[envs]") {
    LQSpec spec;  // paper defaults: sigma=1, N_T=30, dt=1, q=.01, kappa=.5, M=3, L=20
    const LinearQuadraticEnv env(spec);
    REQUIRE(env.state_space().size() == 41);
    REQUIRE(env.action_space().size() == 7);

    const auto w = env.noise_weights();
    REQUIRE(w.size() == 7u);
    CHECK(w[3] == Catch::Approx(0.39905).epsilon(1e-4));
    CHECK(w[2] == Catch::Approx(0.24204).epsilon(1e-4));
    CHECK(w[4] == Catch::Approx(0.24204).epsilon(1e-4));
    CHECK(w[1] == Catch::Approx(0.05401).epsilon(1e-3));
    CHECK(w[0] == Catch::Approx(0.004433).epsilon(1e-3));
    double total = 0.0;
    for (double v : w) total += v;
    CHECK(total == Catch::Approx(1.0).epsilon(1e-14));

    const auto mu = Distribution::uniform(41);
    SECTION("x=0, a=0 spreads over the noise support with those weights") {
        const int x0 = env.state_of_position(0);
        const int a0 = 3;  // move 0
        const auto& t = env.transition(0, x0, a0, mu);
        REQUIRE(t.size() == 7u);
        for (int k = -3; k <= 3; ++k)
            CHECK(sparse_prob_at(t, env.state_of_position(k)) ==
                  Catch::Approx(w[static_cast<std::size_t>(k + 3)]));
    }
    SECTION("upper boundary clamps all mass at or below L") {
        const int xl = env.state_of_position(20);
        const int amax = 6;  // move +3
        const auto& t = env.transition(0, xl, amax, mu);
        double s = 0.0;
        for (const auto& o : t) {
            CHECK(env.position_of(o.state) <= 20);
            s += o.prob;
        }
        CHECK(s == Catch::Approx(1.0).epsilon(1e-14));
        CHECK(sparse_prob_at(t, xl) > 0.9);  // +3 and most noise clamp to L
    }
    SECTION("rows sum to one everywhere") {
        for (int x = 0; x < 41; ++x)
            for (int a = 0; a < 7; ++a) {
                double s = 0.0;
                for (const auto& o : env.transition(0, x, a, mu)) s += o.prob;
                CHECK(std::abs(s - 1.0) <= 1e-12);
            }
    }
}

TEST_CASE("linear quadratic rewards", "[envs]") {
    LQSpec spec;
    const LinearQuadraticEnv env(spec);

    SECTION("m = x with a = 0 scores zero") {
        const auto point = Distribution::dirac(41, env.state_of_position(4));
        CHECK(env.population_mean(point) == Catch::Approx(4.0));
        CHECK(env.reward(3, env.state_of_position(4), 3, point) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("m - x = 2, a = 1 evaluates to -1.48") {
        // all mass at position 2, agent at position 0, action +1
        const auto mu = Distribution::dirac(41, env.state_of_position(2));
        const int a_plus1 = 4;
        CHECK(env.reward(0, env.state_of_position(0), a_plus1, mu) ==
              Catch::Approx(-0.5 + 0.02 - 1.0).epsilon(1e-12));
    }
    SECTION("terminal reward ignores the action") {
        const auto mu = Distribution::dirac(41, env.state_of_position(2));
        const int x = env.state_of_position(0);
        CHECK(env.reward(30, x, 0, mu) == Catch::Approx(-2.0).epsilon(1e-12));
        CHECK(env.reward(30, x, 6, mu) == Catch::Approx(-2.0).epsilon(1e-12));
        CHECK(env.has_terminal_reward());
    }
}
