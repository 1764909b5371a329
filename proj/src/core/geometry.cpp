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

#include "core/geometry.hpp"

#include "core/errors.hpp"

namespace vaairs {

DirectionAngles angles_between(const Vec3 &from, const Vec3 &to) {
    const Vec3 d = to - from;
    const double r = d.norm();
    if (r == 0.0)
        throw DomainError("angles_between: coincident points");
    DirectionAngles out;
    double c = d.z / r;
    if (c > 1.0)
        c = 1.0;
    else if (c < -1.0)
        c = -1.0;
    out.theta = std::acos(c);
    out.phi = (d.x == 0.0 && d.y == 0.0) ? 0.0 : std::atan2(d.y, d.x);
    return out;
}

LinkTrig link_trig(const Vec3 &from, const Vec3 &to) {
    const Vec3 d = to - from;
    const double r = d.norm();
    if (r == 0.0)
        throw DomainError("link_trig: coincident points");
    const double h = std::hypot(d.x, d.y);
    LinkTrig out;
    out.sin_vertical = d.z / r;
    if (h == 0.0) {
        out.cos_horizontal = 1.0;
        out.sin_horizontal = 0.0;
    } else {
        out.cos_horizontal = d.x / h;
        out.sin_horizontal = d.y / h;
    }
    return out;
}

GaussMarkovWalker::GaussMarkovWalker(const WalkerParams &params,
                                     const Rect &area, const Vec3 &start,
                                     double speed, double direction,
                                     RngStream rng)
    : params_(params), area_(area), position_{area.clip_x(start.x),
                                              area.clip_y(start.y), 0.0},
      speed_(speed < 0.0 ? 0.0 : speed), direction_(direction),
      rng_(std::move(rng)) {}

void GaussMarkovWalker::step(double dt) {
    const double a = params_.memory;
    const double blend = std::sqrt(1.0 - a * a);
    speed_ = a * speed_ + (1.0 - a) * params_.mean_speed +
             blend * params_.noise_std * rng_.normal();
    if (speed_ < 0.0)
        speed_ = 0.0;
    direction_ = a * direction_ + (1.0 - a) * params_.mean_direction +
                 blend * params_.noise_std * rng_.normal();
    position_.x = area_.clip_x(position_.x + speed_ * std::cos(direction_) * dt);
    position_.y = area_.clip_y(position_.y + speed_ * std::sin(direction_) * dt);
}

} // namespace vaairs
