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

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "core/channel.hpp"
#include "core/geometry.hpp"
#include "core/irs.hpp"
#include "core/link_metrics.hpp"
#include "core/uav.hpp"

namespace vaairs {

// World layout and episode shape. Angular resolutions are in degrees here
// because that is how they read in config files; they are converted at use.
struct ScenarioParams {
    int num_uavs = 8;
    Rect area{0.0, 100.0, 0.0, 100.0};
    double alt_min = 75.0;
    double alt_max = 95.0;
    double min_separation = 0.5; // m, collision threshold
    Vec3 irs_position{50.0, 50.0, 20.0};
    double v_max = 20.0;    // m/s horizontal speed cap
    double climb_max = 5.0; // m per slot, vertical cap
    int horizon = 100;      // slots per episode
    double slot_seconds = 1.0;
    double efficiency = 1.0;      // array radiation efficiency
    double quadrature_deg = 1.0;  // radiated-power integral resolution
    double sll_grid_deg = 0.5;    // sidelobe scan resolution
    ChannelParams channel;
    RadioParams radio;
    PropulsionParams propulsion;
    WalkerParams walker; // shared by user and eavesdropper

    void validate() const; // throws ConfigError
};

// Reward shaping. The objective blend applies when an agent violated no
// constraint this slot; otherwise only penalties apply. The incentive bonus
// rewards moving toward the reflecting surface and staying near a reference
// point (defaults to the center of the flight volume).
struct RewardWeights {
    double secrecy_weight = 1.0;   // per Mbit/s of clipped secrecy rate
    double sidelobe_weight = -0.5; // per unit of sidelobe ratio
    double energy_weight = -0.1;   // per kJ of whole-swarm slot energy
    double boundary_penalty = 10.0;
    double collision_penalty = 10.0; // per colliding pair
    double direction_bonus = 0.1;
    double position_penalty = 0.05;
    bool has_reference = false; // false -> center of flight volume
    Vec3 reference{0.0, 0.0, 0.0};

    void validate() const; // throws ConfigError
};

struct StepResult {
    Eigen::VectorXd observation;
    std::vector<double> rewards;
    SlotMetrics metrics;
    std::vector<std::uint8_t> boundary_violation; // per agent
    std::vector<int> collision_count;             // partners per agent
    std::vector<double> slot_energy;              // J per agent
    double total_energy = 0.0;                    // J, swarm
    PhaseShiftVector phases;                      // applied this slot
    bool done = false;
};

// Movement bonus: cosine alignment between the displacement and the bearing
// to the surface, minus a normalized distance to the reference point.
double incentive_bonus(const Vec3 &old_pos, const Vec3 &new_pos,
                       const Vec3 &irs_pos, const Vec3 &reference,
                       double box_diagonal, const RewardWeights &weights);

// The multi-agent episode driver: kinematics, mobility, channels, surface
// phases, link metrics, energies and rewards for one slot per step() call.
class Environment {
  public:
    Environment(ScenarioParams scenario, RewardWeights weights,
                std::uint64_t seed);

    // Starts the next episode (first call included) and returns the initial
    // observation. Episode initializations form a deterministic sequence of
    // the construction seed.
    Eigen::VectorXd reset();

    // Advances one slot. Actions are clipped to their bounds. Throws
    // RuntimeFailure when called on a finished or never-reset episode.
    StepResult step(const std::vector<UavAction> &actions);

    Eigen::VectorXd observe() const;

    int num_agents() const { return scenario_.num_uavs; }
    int obs_dim() const { return 3 * scenario_.num_uavs + 4; }
    static constexpr int kActionDim = 4;

    const ScenarioParams &scenario() const { return scenario_; }
    const RewardWeights &weights() const { return weights_; }
    const std::vector<UavState> &uav_states() const { return uavs_; }
    const Vec3 &user_position() const;
    const Vec3 &eavesdropper_position() const;
    int slot() const { return slot_; }
    bool episode_open() const { return episode_open_; }
    Vec3 reference_point() const { return reference_; }

    UavAction clip_action(const UavAction &a) const;

  private:
    void rebuild_vaa();

    ScenarioParams scenario_;
    RewardWeights weights_;
    RngStream master_;
    RngStream episode_rng_;
    std::uint64_t episode_counter_ = 0;
    int slot_ = 0;
    bool episode_open_ = false;

    std::vector<UavState> uavs_;
    std::vector<GaussMarkovWalker> walkers_; // [0] user, [1] eavesdropper
    VaaConfig vaa_;
    Vec3 reference_;
    double box_diagonal_ = 1.0;
};

} // namespace vaairs
