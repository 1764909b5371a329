// SPDX-License-Identifier: Apache-2.0
//
// vaairs - secure aerial relay simulator
// Copyright (C) 2026 vaairs developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#include "core/environment.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace vaairs {

namespace {
constexpr double kDegToRad = kPi / 180.0;

// Child-stream keys of the per-episode stream. Slot channel streams use
// kChannelBase + slot index.
constexpr std::uint64_t kUavInitKey = 1;
constexpr std::uint64_t kUserWalkKey = 2;
constexpr std::uint64_t kEveWalkKey = 3;
constexpr std::uint64_t kChannelBase = 1000;
} // namespace

void ScenarioParams::validate() const {
    if (num_uavs < 1)
        throw ConfigError("ScenarioParams: need at least one vehicle");
    if (!(area.x_max > area.x_min) || !(area.y_max > area.y_min))
        throw ConfigError("ScenarioParams: empty ground area");
    if (!(alt_max > alt_min))
        throw ConfigError("ScenarioParams: empty altitude band");
    if (!(min_separation >= 0.0))
        throw ConfigError("ScenarioParams: min_separation must be >= 0");
    if (!(v_max > 0.0) || !(climb_max >= 0.0))
        throw ConfigError("ScenarioParams: motion caps must be positive");
    if (horizon < 1)
        throw ConfigError("ScenarioParams: horizon must be >= 1");
    if (!(slot_seconds > 0.0))
        throw ConfigError("ScenarioParams: slot_seconds must be positive");
    if (!(efficiency > 0.0) || efficiency > 1.0)
        throw ConfigError("ScenarioParams: efficiency must be in (0, 1]");
    if (!(quadrature_deg > 0.0) || !(sll_grid_deg > 0.0))
        throw ConfigError("ScenarioParams: grid resolutions must be positive");
    if (irs_position.z >= alt_min)
        throw ConfigError("ScenarioParams: surface must sit below the "
                          "flight band");
    channel.validate();
    radio.validate();
    propulsion.validate();
}

void RewardWeights::validate() const {
    if (!(boundary_penalty >= 0.0) || !(collision_penalty >= 0.0))
        throw ConfigError("RewardWeights: penalties must be >= 0");
}

double incentive_bonus(const Vec3 &old_pos, const Vec3 &new_pos,
                       const Vec3 &irs_pos, const Vec3 &reference,
                       double box_diagonal, const RewardWeights &weights) {
    const Vec3 disp = new_pos - old_pos;
    const Vec3 toward = irs_pos - old_pos;
    const double dn = disp.norm();
    const double tn = toward.norm();
    double cosine = 0.0;
    if (dn > 1e-12 && tn > 1e-12)
        cosine = disp.dot(toward) / (dn * tn);
    const double dist = distance(new_pos, reference);
    return weights.direction_bonus * cosine -
           weights.position_penalty * dist / box_diagonal;
}

Environment::Environment(ScenarioParams scenario, RewardWeights weights,
                         std::uint64_t seed)
    : scenario_(std::move(scenario)), weights_(weights), master_(seed),
      episode_rng_(master_.child(0)) {
    scenario_.validate();
    weights_.validate();
    const double dx = scenario_.area.x_max - scenario_.area.x_min;
    const double dy = scenario_.area.y_max - scenario_.area.y_min;
    const double dz = scenario_.alt_max - scenario_.alt_min;
    box_diagonal_ = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (weights_.has_reference) {
        reference_ = weights_.reference;
    } else {
        reference_ = {0.5 * (scenario_.area.x_min + scenario_.area.x_max),
                      0.5 * (scenario_.area.y_min + scenario_.area.y_max),
                      0.5 * (scenario_.alt_min + scenario_.alt_max)};
    }
    vaa_.wavelength = scenario_.channel.wavelength;
    vaa_.efficiency = scenario_.efficiency;
}

void Environment::rebuild_vaa() {
    vaa_.positions.resize(uavs_.size());
    vaa_.weights.resize(uavs_.size());
    for (std::size_t m = 0; m < uavs_.size(); ++m) {
        vaa_.positions[m] = uavs_[m].position;
        vaa_.weights[m] = uavs_[m].weight;
    }
}

Eigen::VectorXd Environment::reset() {
    episode_rng_ = master_.child(episode_counter_++);
    slot_ = 0;
    episode_open_ = true;

    RngStream init = episode_rng_.child(kUavInitKey);
    uavs_.assign(static_cast<std::size_t>(scenario_.num_uavs), UavState{});
    const int max_tries = 1000 * scenario_.num_uavs;
    int placed = 0, tries = 0;
    while (placed < scenario_.num_uavs) {
        if (++tries > max_tries)
            throw RuntimeFailure("reset: cannot place vehicles with the "
                                 "requested separation");
        Vec3 p{init.uniform(scenario_.area.x_min, scenario_.area.x_max),
               init.uniform(scenario_.area.y_min, scenario_.area.y_max),
               init.uniform(scenario_.alt_min, scenario_.alt_max)};
        bool ok = true;
        for (int m = 0; m < placed; ++m)
            if (distance(uavs_[m].position, p) < scenario_.min_separation) {
                ok = false;
                break;
            }
        if (!ok)
            continue;
        uavs_[placed].position = p;
        uavs_[placed].weight = 1.0;
        uavs_[placed].avg_speed = 0.0;
        ++placed;
    }
    rebuild_vaa();

    walkers_.clear();
    RngStream user_rng = episode_rng_.child(kUserWalkKey);
    RngStream eve_rng = episode_rng_.child(kEveWalkKey);
    const auto spawn = [&](RngStream rng) {
        Vec3 start{rng.uniform(scenario_.area.x_min, scenario_.area.x_max),
                   rng.uniform(scenario_.area.y_min, scenario_.area.y_max),
                   0.0};
        const double direction = rng.uniform(0.0, 2.0 * kPi);
        return GaussMarkovWalker(scenario_.walker, scenario_.area, start,
                                 scenario_.walker.mean_speed, direction,
                                 std::move(rng));
    };
    walkers_.push_back(spawn(std::move(user_rng)));
    walkers_.push_back(spawn(std::move(eve_rng)));

    return observe();
}

const Vec3 &Environment::user_position() const {
    if (walkers_.size() < 2)
        throw RuntimeFailure("environment not reset");
    return walkers_[0].position();
}

const Vec3 &Environment::eavesdropper_position() const {
    if (walkers_.size() < 2)
        throw RuntimeFailure("environment not reset");
    return walkers_[1].position();
}

Eigen::VectorXd Environment::observe() const {
    if (walkers_.size() < 2)
        throw RuntimeFailure("environment not reset");
    const auto norm = [](double v, double lo, double hi) {
        return 2.0 * (v - lo) / (hi - lo) - 1.0;
    };
    Eigen::VectorXd obs(obs_dim());
    int k = 0;
    for (const UavState &u : uavs_) {
        obs(k++) = norm(u.position.x, scenario_.area.x_min, scenario_.area.x_max);
        obs(k++) = norm(u.position.y, scenario_.area.y_min, scenario_.area.y_max);
        obs(k++) = norm(u.position.z, scenario_.alt_min, scenario_.alt_max);
    }
    const Vec3 &up = walkers_[0].position();
    const Vec3 &ep = walkers_[1].position();
    obs(k++) = norm(up.x, scenario_.area.x_min, scenario_.area.x_max);
    obs(k++) = norm(up.y, scenario_.area.y_min, scenario_.area.y_max);
    obs(k++) = norm(ep.x, scenario_.area.x_min, scenario_.area.x_max);
    obs(k++) = norm(ep.y, scenario_.area.y_min, scenario_.area.y_max);
    return obs;
}

UavAction Environment::clip_action(const UavAction &a) const {
    UavAction c = a;
    c.weight = std::clamp(c.weight, 0.0, 1.0);
    c.speed = std::clamp(c.speed, 0.0, scenario_.v_max);
    c.direction = wrap_phase(c.direction);
    c.climb = std::clamp(c.climb, -scenario_.climb_max, scenario_.climb_max);
    return c;
}

StepResult Environment::step(const std::vector<UavAction> &actions) {
    if (!episode_open_)
        throw RuntimeFailure("step: episode is finished or not started; "
                             "call reset()");
    if (actions.size() != uavs_.size())
        throw RuntimeFailure("step: one action per vehicle required");

    const int n = scenario_.num_uavs;
    const double dt = scenario_.slot_seconds;
    StepResult out;
    out.boundary_violation.assign(static_cast<std::size_t>(n), 0);
    out.collision_count.assign(static_cast<std::size_t>(n), 0);
    out.slot_energy.assign(static_cast<std::size_t>(n), 0.0);
    out.rewards.assign(static_cast<std::size_t>(n), 0.0);

    std::vector<Vec3> old_pos(static_cast<std::size_t>(n));
    std::vector<UavAction> clipped(static_cast<std::size_t>(n));

    for (int m = 0; m < n; ++m) {
        old_pos[m] = uavs_[m].position;
        clipped[m] = clip_action(actions[m]);
        const UavState before = uavs_[m];
        AdvanceResult adv = advance(before, clipped[m], dt);

        Vec3 p = adv.state.position;
        const bool outside =
            p.x < scenario_.area.x_min || p.x > scenario_.area.x_max ||
            p.y < scenario_.area.y_min || p.y > scenario_.area.y_max ||
            p.z < scenario_.alt_min || p.z > scenario_.alt_max;
        if (outside) {
            out.boundary_violation[m] = 1;
            p.x = scenario_.area.clip_x(p.x);
            p.y = scenario_.area.clip_y(p.y);
            p.z = std::clamp(p.z, scenario_.alt_min, scenario_.alt_max);
        }
        UavState after;
        after.position = p;
        after.weight = clipped[m].weight;
        after.avg_speed = distance(old_pos[m], p) / dt;
        out.slot_energy[m] = slot_energy(before, after, clipped[m],
                                         scenario_.propulsion, dt);
        out.total_energy += out.slot_energy[m];
        uavs_[m] = after;
    }

    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (distance(uavs_[a].position, uavs_[b].position) <
                scenario_.min_separation) {
                ++out.collision_count[a];
                ++out.collision_count[b];
            }

    rebuild_vaa();
    walkers_[0].step(dt);
    walkers_[1].step(dt);

    const Vec3 center = swarm_centroid(vaa_.positions);
    const RngStream slot_rng =
        episode_rng_.child(kChannelBase + static_cast<std::uint64_t>(slot_));
    const ChannelSet channels =
        realize_channels(vaa_, scenario_.irs_position, walkers_[0].position(),
                         walkers_[1].position(), scenario_.channel, slot_rng);
    out.phases = closed_form_phases(
        link_trig(center, scenario_.irs_position),
        link_trig(scenario_.irs_position, walkers_[0].position()),
        scenario_.channel);
    out.metrics = slot_metrics(channels, out.phases, vaa_, scenario_.radio,
                               angles_between(center, scenario_.irs_position),
                               scenario_.quadrature_deg * kDegToRad,
                               scenario_.sll_grid_deg * kDegToRad);

    const double objective =
        weights_.secrecy_weight * std::max(out.metrics.secrecy_rate, 0.0) / 1e6 +
        weights_.sidelobe_weight * out.metrics.max_sidelobe +
        weights_.energy_weight * out.total_energy / 1000.0;
    for (int m = 0; m < n; ++m) {
        const bool violated =
            out.boundary_violation[m] != 0 || out.collision_count[m] > 0;
        if (violated) {
            out.rewards[m] =
                -weights_.boundary_penalty * out.boundary_violation[m] -
                weights_.collision_penalty * out.collision_count[m];
        } else {
            out.rewards[m] =
                objective + incentive_bonus(old_pos[m], uavs_[m].position,
                                            scenario_.irs_position, reference_,
                                            box_diagonal_, weights_);
        }
    }

    ++slot_;
    if (slot_ >= scenario_.horizon) {
        out.done = true;
        episode_open_ = false;
    }
    out.observation = observe();
    return out;
}

} // namespace vaairs
