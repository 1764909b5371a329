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

#include <cmath>

#include "core/rng.hpp"

namespace vaairs {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 &operator+=(const Vec3 &o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(const Vec3 &a, const Vec3 &b) { return (b - a).norm(); }

// Spherical direction: theta is the polar angle measured from +z,
// phi the azimuth from +x toward +y.
struct DirectionAngles {
    double theta = 0.0; // [0, pi]
    double phi = 0.0;   // (-pi, pi]
};

// Direction of `to` as seen from `from`. Throws DomainError when the points
// coincide (the direction is undefined).
DirectionAngles angles_between(const Vec3 &from, const Vec3 &to);

// Trigonometric factors of a link bearing as used by planar-array steering:
// sin of the vertical angle (measured from the array normal pointing up) and
// cos/sin of the horizontal azimuth. A strictly vertical link has no defined
// azimuth; the convention here is cos = 1, sin = 0.
struct LinkTrig {
    double sin_vertical = 0.0;
    double cos_horizontal = 1.0;
    double sin_horizontal = 0.0;
};

LinkTrig link_trig(const Vec3 &from, const Vec3 &to);

// Axis-aligned horizontal rectangle used for ground mobility bounds.
struct Rect {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    double clip_x(double x) const {
        return x < x_min ? x_min : (x > x_max ? x_max : x);
    }
    double clip_y(double y) const {
        return y < y_min ? y_min : (y > y_max ? y_max : y);
    }
};

struct WalkerParams {
    double memory = 0.8;     // AR(1) coefficient in [0, 1]
    double mean_speed = 1.0; // m/s, long-run average
    double mean_direction = 0.0;
    double noise_std = 0.3;
};

// First-order Gauss-Markov ground walker: speed and heading are AR(1)
// processes around their means, position integrates the velocity and is
// clipped to the bounding rectangle. z stays 0.
class GaussMarkovWalker {
  public:
    GaussMarkovWalker(const WalkerParams &params, const Rect &area,
                      const Vec3 &start, double speed, double direction,
                      RngStream rng);

    void step(double dt);

    const Vec3 &position() const { return position_; }
    double speed() const { return speed_; }
    double direction() const { return direction_; }

  private:
    WalkerParams params_;
    Rect area_;
    Vec3 position_;
    double speed_;
    double direction_;
    RngStream rng_;
};

} // namespace vaairs
