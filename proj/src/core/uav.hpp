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

#include "core/geometry.hpp"

namespace vaairs {

// Rotary-wing propulsion constants.
struct PropulsionParams {
    double blade_power = 79.86;       // W, profile power at hover
    double induced_power = 88.63;     // W, induced power at hover
    double tip_speed = 120.0;         // m/s
    double hover_induced_speed = 4.03; // m/s
    double fuselage_drag_ratio = 0.6;
    double rotor_solidity = 0.05;
    double air_density = 1.225;    // kg/m^3
    double rotor_disc_area = 0.503; // m^2
    double mass = 2.0;             // kg
    double gravity = 9.8;          // m/s^2

    void validate() const; // throws ConfigError
};

struct UavState {
    Vec3 position;
    double weight = 1.0;    // current excitation amplitude in [0, 1]
    double avg_speed = 0.0; // mean speed over the previous slot, m/s
};

// One slot's command: excitation amplitude, horizontal speed and heading,
// and the signed vertical displacement for the slot.
struct UavAction {
    double weight = 1.0;
    double speed = 0.0;     // m/s, horizontal
    double direction = 0.0; // rad
    double climb = 0.0;     // m, signed
};

struct AdvanceResult {
    UavState state;      // position moved, weight applied, avg_speed updated
    double displacement; // straight-line distance covered this slot, m
};

// Kinematic update over one slot of length dt.
AdvanceResult advance(const UavState &state, const UavAction &action,
                      double dt);

// Rotary-wing power at horizontal speed v: blade profile + induced +
// fuselage parasite terms.
double propulsion_power(double speed, const PropulsionParams &params);

// Speed minimizing propulsion power on [0, v_max], golden-section search to
// 1e-3 m/s.
double energy_optimal_speed(const PropulsionParams &params, double v_max);

// Energy drawn over one slot: propulsion at the commanded speed, plus the
// change in kinetic energy of the slot-average speed, plus potential energy
// of the climb. Literal model; descending slots can report negative totals.
double slot_energy(const UavState &before, const UavState &after,
                   const UavAction &action, const PropulsionParams &params,
                   double dt);

} // namespace vaairs
