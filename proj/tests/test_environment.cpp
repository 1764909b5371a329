// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/environment.hpp"
#include "core/errors.hpp"

using namespace vaairs;

namespace {

// Small, fast scenario: two vehicles, 2x2 surface, coarse integration grids.
ScenarioParams tiny_scenario() {
    ScenarioParams s;
    s.num_uavs = 2;
    s.horizon = 6;
    s.quadrature_deg = 6.0;
    s.sll_grid_deg = 3.0;
    s.channel.rows = 2;
    s.channel.cols = 2;
    s.min_separation = 0.5;
    return s;
}

double unnorm(double v, double lo, double hi) {
    return lo + (v + 1.0) * 0.5 * (hi - lo);
}

} // namespace

TEST_CASE("observation layout and bounds") {
    Environment env(tiny_scenario(), RewardWeights{}, 42);
    Eigen::VectorXd obs = env.reset();
    REQUIRE(obs.size() == env.obs_dim());
    REQUIRE(env.obs_dim() == 3 * 2 + 4);
    for (int i = 0; i < obs.size(); ++i) {
        CHECK(obs(i) >= -1.0);
        CHECK(obs(i) <= 1.0);
    }
    // decode vehicle positions back out of the normalized observation
    const ScenarioParams &s = env.scenario();
    for (int m = 0; m < 2; ++m) {
        const Vec3 &p = env.uav_states()[m].position;
        CHECK(unnorm(obs(3 * m + 0), s.area.x_min, s.area.x_max) ==
              doctest::Approx(p.x).epsilon(1e-9));
        CHECK(unnorm(obs(3 * m + 1), s.area.y_min, s.area.y_max) ==
              doctest::Approx(p.y).epsilon(1e-9));
        CHECK(unnorm(obs(3 * m + 2), s.alt_min, s.alt_max) ==
              doctest::Approx(p.z).epsilon(1e-9));
    }
    CHECK(unnorm(obs(6), s.area.x_min, s.area.x_max) ==
          doctest::Approx(env.user_position().x).epsilon(1e-9));
    CHECK(unnorm(obs(8), s.area.x_min, s.area.x_max) ==
          doctest::Approx(env.eavesdropper_position().x).epsilon(1e-9));
}

TEST_CASE("reset sequence is deterministic per seed, distinct per episode") {
    Environment a(tiny_scenario(), RewardWeights{}, 7);
    Environment b(tiny_scenario(), RewardWeights{}, 7);
    Eigen::VectorXd oa = a.reset(), ob = b.reset();
    CHECK((oa - ob).norm() == 0.0);
    Eigen::VectorXd oa2 = a.reset();
    CHECK((oa - oa2).norm() > 0.0);
    Environment c(tiny_scenario(), RewardWeights{}, 8);
    CHECK((c.reset() - oa).norm() > 0.0);
}

TEST_CASE("stepping before reset or after the horizon throws") {
    Environment env(tiny_scenario(), RewardWeights{}, 1);
    std::vector<UavAction> hover(2);
    CHECK_THROWS_AS(env.step(hover), RuntimeFailure);
    env.reset();
    StepResult last;
    for (int t = 0; t < 6; ++t) {
        CHECK(env.episode_open());
        last = env.step(hover);
        CHECK(last.done == (t == 5));
    }
    CHECK_FALSE(env.episode_open());
    CHECK_THROWS_AS(env.step(hover), RuntimeFailure);
    // wrong action count
    env.reset();
    std::vector<UavAction> three(3);
    CHECK_THROWS_AS(env.step(three), RuntimeFailure);
}

TEST_CASE("action clipping") {
    Environment env(tiny_scenario(), RewardWeights{}, 3);
    UavAction wild;
    wild.weight = 2.5;
    wild.speed = 999.0;
    wild.direction = -kPi / 2;
    wild.climb = -100.0;
    UavAction c = env.clip_action(wild);
    CHECK(c.weight == doctest::Approx(1.0));
    CHECK(c.speed == doctest::Approx(env.scenario().v_max));
    CHECK(c.direction == doctest::Approx(3 * kPi / 2));
    CHECK(c.climb == doctest::Approx(-env.scenario().climb_max));
    UavAction neg;
    neg.weight = -0.4;
    neg.speed = -3.0;
    UavAction cn = env.clip_action(neg);
    CHECK(cn.weight == doctest::Approx(0.0));
    CHECK(cn.speed == doctest::Approx(0.0));
}

TEST_CASE("excitation weights land in the array state") {
    Environment env(tiny_scenario(), RewardWeights{}, 3);
    env.reset();
    std::vector<UavAction> acts(2);
    acts[0].weight = 0.25;
    acts[1].weight = 7.0; // clipped to 1
    env.step(acts);
    CHECK(env.uav_states()[0].weight == doctest::Approx(0.25));
    CHECK(env.uav_states()[1].weight == doctest::Approx(1.0));
}

TEST_CASE("driving into the wall flags the boundary and clamps the position") {
    ScenarioParams s = tiny_scenario();
    Environment env(s, RewardWeights{}, 11);
    env.reset();
    std::vector<UavAction> east(2);
    for (auto &a : east) {
        a.speed = s.v_max;
        a.direction = 0.0; // straight +x
    }
    bool saw_violation = false;
    for (int t = 0; t < 6; ++t) {
        StepResult r = env.step(east);
        for (int m = 0; m < 2; ++m) {
            const Vec3 &p = env.uav_states()[m].position;
            CHECK(p.x <= s.area.x_max);
            CHECK(p.x >= s.area.x_min);
            if (r.boundary_violation[m]) {
                saw_violation = true;
                if (r.collision_count[m] == 0)
                    CHECK(r.rewards[m] ==
                          doctest::Approx(-env.weights().boundary_penalty));
            }
        }
        if (r.done) break;
    }
    CHECK(saw_violation);
}

TEST_CASE("converging vehicles collide and both get the pair penalty") {
    ScenarioParams s = tiny_scenario();
    s.min_separation = 30.0;
    s.horizon = 12;
    RewardWeights w;
    Environment env(s, w, 19);
    env.reset();
    const Vec3 target{50.0, 50.0, 85.0};
    bool saw_collision = false;
    for (int t = 0; t < 12; ++t) {
        std::vector<UavAction> acts(2);
        for (int m = 0; m < 2; ++m) {
            const Vec3 &p = env.uav_states()[m].position;
            double dx = target.x - p.x, dy = target.y - p.y;
            acts[m].direction = std::atan2(dy, dx);
            acts[m].speed = std::min(s.v_max, std::hypot(dx, dy));
            acts[m].climb = std::clamp(target.z - p.z, -s.climb_max, s.climb_max);
        }
        StepResult r = env.step(acts);
        if (r.collision_count[0] > 0) {
            saw_collision = true;
            CHECK(r.collision_count[1] == r.collision_count[0]);
            for (int m = 0; m < 2; ++m)
                if (!r.boundary_violation[m])
                    CHECK(r.rewards[m] ==
                          doctest::Approx(-w.collision_penalty *
                                          r.collision_count[m]));
        }
        if (r.done) break;
    }
    CHECK(saw_collision);
}

TEST_CASE("clean slots reconstruct the shaped reward exactly") {
    ScenarioParams s = tiny_scenario();
    Environment env(s, RewardWeights{}, 23);
    env.reset();
    const RewardWeights &w = env.weights();
    const double dx = s.area.x_max - s.area.x_min;
    const double dy = s.area.y_max - s.area.y_min;
    const double dz = s.alt_max - s.alt_min;
    const double diag = std::sqrt(dx * dx + dy * dy + dz * dz);
    std::vector<UavAction> acts(2);
    acts[0].speed = 1.0;
    acts[0].direction = 1.0;
    acts[1].speed = 0.5;
    acts[1].direction = 4.0;
    acts[1].climb = 0.2;
    for (int t = 0; t < 4; ++t) {
        std::vector<Vec3> old_pos;
        for (const auto &u : env.uav_states()) old_pos.push_back(u.position);
        StepResult r = env.step(acts);
        double objective =
            w.secrecy_weight * std::max(r.metrics.secrecy_rate, 0.0) / 1e6 +
            w.sidelobe_weight * r.metrics.max_sidelobe +
            w.energy_weight * r.total_energy / 1000.0;
        for (int m = 0; m < 2; ++m) {
            if (r.boundary_violation[m] || r.collision_count[m] > 0) continue;
            double expected =
                objective + incentive_bonus(old_pos[m],
                                            env.uav_states()[m].position,
                                            s.irs_position,
                                            env.reference_point(), diag, w);
            CHECK(r.rewards[m] == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("incentive bonus geometry") {
    RewardWeights w;
    Vec3 irs{100, 0, 0};
    // moving straight toward the surface from the reference point
    double b1 = incentive_bonus({0, 0, 0}, {1, 0, 0}, irs, {1, 0, 0}, 10.0, w);
    CHECK(b1 == doctest::Approx(w.direction_bonus));
    // moving straight away
    double b2 = incentive_bonus({0, 0, 0}, {-1, 0, 0}, irs, {-1, 0, 0}, 10.0, w);
    CHECK(b2 == doctest::Approx(-w.direction_bonus));
    // stationary: no direction term, only the distance term
    double b3 = incentive_bonus({3, 4, 0}, {3, 4, 0}, irs, {0, 0, 0}, 10.0, w);
    CHECK(b3 == doctest::Approx(-w.position_penalty * 0.5));
}

TEST_CASE("energies add up and metrics stay finite") {
    Environment env(tiny_scenario(), RewardWeights{}, 31);
    env.reset();
    std::vector<UavAction> acts(2);
    acts[0].speed = 3.0;
    acts[1].speed = 2.0;
    acts[1].direction = 2.0;
    StepResult r = env.step(acts);
    double total = 0.0;
    for (double e : r.slot_energy) total += e;
    CHECK(r.total_energy == doctest::Approx(total).epsilon(1e-12));
    CHECK(std::isfinite(r.metrics.secrecy_rate));
    CHECK(r.metrics.rate_user >= 0.0);
    CHECK(r.metrics.rate_eve >= 0.0);
    CHECK(r.metrics.max_sidelobe > 0.0);
    CHECK(r.phases.phases.size() == env.scenario().channel.num_elements());
}

TEST_CASE("full episodes replay identically from the same seed") {
    auto run = [](std::uint64_t seed) {
        Environment env(tiny_scenario(), RewardWeights{}, seed);
        env.reset();
        std::vector<double> log;
        std::vector<UavAction> acts(2);
        acts[0].speed = 2.0;
        acts[1].speed = 1.0;
        acts[1].direction = 3.0;
        for (int t = 0; t < 6; ++t) {
            acts[0].direction = 0.5 * t;
            StepResult r = env.step(acts);
            log.push_back(r.rewards[0]);
            log.push_back(r.rewards[1]);
            log.push_back(r.metrics.secrecy_rate);
            log.push_back(r.total_energy);
            log.push_back(r.observation(0));
        }
        return log;
    };
    std::vector<double> a = run(555), b = run(555), c = run(556);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != c[i]) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("scenario validation rejects a surface inside the flight band") {
    ScenarioParams s = tiny_scenario();
    s.irs_position.z = 80.0;
    CHECK_THROWS_AS(Environment(s, RewardWeights{}, 1), ConfigError);
}
