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

#include "core/uav.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace vaairs {

void PropulsionParams::validate() const {
    if (!(blade_power >= 0.0) || !(induced_power >= 0.0))
        throw ConfigError("PropulsionParams: hover powers must be >= 0");
    if (!(tip_speed > 0.0) || !(hover_induced_speed > 0.0))
        throw ConfigError("PropulsionParams: reference speeds must be positive");
    if (!(mass > 0.0))
        throw ConfigError("PropulsionParams: mass must be positive");
    if (!(air_density > 0.0) || !(rotor_disc_area > 0.0))
        throw ConfigError("PropulsionParams: rotor constants must be positive");
}

AdvanceResult advance(const UavState &state, const UavAction &action,
                      double dt) {
    if (!(dt > 0.0))
        throw DomainError("advance: dt must be positive");
    if (action.speed < 0.0)
        throw DomainError("advance: negative speed");
    AdvanceResult out;
    const double dx = action.speed * std::cos(action.direction) * dt;
    const double dy = action.speed * std::sin(action.direction) * dt;
    out.state.position = {state.position.x + dx, state.position.y + dy,
                          state.position.z + action.climb};
    out.state.weight = action.weight;
    out.displacement = std::sqrt(dx * dx + dy * dy + action.climb * action.climb);
    out.state.avg_speed = out.displacement / dt;
    return out;
}

double propulsion_power(double speed, const PropulsionParams &p) {
    if (speed < 0.0)
        throw DomainError("propulsion_power: negative speed");
    const double v2 = speed * speed;
    const double blade =
        p.blade_power * (1.0 + 3.0 * v2 / (p.tip_speed * p.tip_speed));
    const double v0_2 = p.hover_induced_speed * p.hover_induced_speed;
    const double induced =
        p.induced_power *
        std::sqrt(std::sqrt(1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)) -
                  v2 / (2.0 * v0_2));
    const double parasite = 0.5 * p.fuselage_drag_ratio * p.air_density *
                            p.rotor_solidity * p.rotor_disc_area * v2 * speed;
    return blade + induced + parasite;
}

double energy_optimal_speed(const PropulsionParams &params, double v_max) {
    if (!(v_max > 0.0))
        throw DomainError("energy_optimal_speed: v_max must be positive");
    // Golden-section search; the power curve is unimodal over practical
    // speed ranges.
    const double gr = 0.6180339887498949;
    double lo = 0.0, hi = v_max;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = propulsion_power(x1, params);
    double f2 = propulsion_power(x2, params);
    while (hi - lo > 1e-3) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = propulsion_power(x1, params);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = propulsion_power(x2, params);
        }
    }
    return 0.5 * (lo + hi);
}

double slot_energy(const UavState &before, const UavState &after,
                   const UavAction &action, const PropulsionParams &params,
                   double dt) {
    if (!(dt > 0.0))
        throw DomainError("slot_energy: dt must be positive");
    const double propulsion = propulsion_power(action.speed, params) * dt;
    const double kinetic = 0.5 * params.mass *
                           (after.avg_speed * after.avg_speed -
                            before.avg_speed * before.avg_speed);
    const double potential =
        params.mass * params.gravity * (after.position.z - before.position.z);
    return propulsion + kinetic + potential;
}

} // namespace vaairs
