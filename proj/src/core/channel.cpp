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

#include "core/channel.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace vaairs {

void ChannelParams::validate() const {
    if (!(path_loss_ref > 0.0))
        throw ConfigError("ChannelParams: path_loss_ref must be positive");
    if (!(alpha_direct > 0.0) || !(alpha_reflect > 0.0))
        throw ConfigError("ChannelParams: path-loss exponents must be positive");
    if (!(rician_k >= 0.0))
        throw ConfigError("ChannelParams: rician_k must be >= 0");
    if (!(wavelength > 0.0))
        throw ConfigError("ChannelParams: wavelength must be positive");
    if (rows < 1 || cols < 1)
        throw ConfigError("ChannelParams: surface needs at least one element");
    if (!(row_spacing > 0.0) || !(col_spacing > 0.0))
        throw ConfigError("ChannelParams: element spacing must be positive");
}

Cvec steering_vector(const LinkTrig &trig, const ChannelParams &params) {
    params.validate();
    const int n = params.num_elements();
    const double k = 2.0 * kPi / params.wavelength;
    Cvec a(n);
    for (int s = 1; s <= n; ++s) {
        const int sr = (s - 1) / params.rows;
        const int sc = (s - 1) % params.rows;
        const double phase =
            -k * (sr * params.row_spacing * trig.cos_horizontal *
                      trig.sin_vertical +
                  sc * params.col_spacing * trig.sin_horizontal *
                      trig.sin_vertical);
        a(s - 1) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return a;
}

Cvec channel_vaa_irs(const VaaConfig &vaa, const Vec3 &vaa_center,
                     const Vec3 &irs_pos, const ChannelParams &params) {
    const double d = distance(vaa_center, irs_pos);
    if (d == 0.0)
        throw DomainError("channel_vaa_irs: surface coincides with the array");
    const std::complex<double> af =
        array_factor(vaa, angles_between(vaa_center, irs_pos));
    const double amp = std::sqrt(params.path_loss_ref) / d;
    return (af * amp) * steering_vector(link_trig(vaa_center, irs_pos), params);
}

Cvec channel_irs_ground(const Vec3 &irs_pos, const Vec3 &terminal,
                        const ChannelParams &params, RngStream &rng) {
    const double d = distance(irs_pos, terminal);
    if (d == 0.0)
        throw DomainError("channel_irs_ground: terminal at the surface");
    const double amp =
        std::sqrt(params.path_loss_ref * std::pow(d, -params.alpha_reflect));
    const double k = params.rician_k;
    const double los_w = std::sqrt(k / (1.0 + k));
    const double nlos_w = std::sqrt(1.0 / (1.0 + k));
    Cvec h = steering_vector(link_trig(irs_pos, terminal), params);
    for (int s = 0; s < h.size(); ++s)
        h(s) = amp * (los_w * h(s) + nlos_w * rng.complex_normal());
    return h;
}

std::complex<double> channel_vaa_ground(const VaaConfig &vaa,
                                        const Vec3 &vaa_center,
                                        const Vec3 &terminal,
                                        const ChannelParams &params,
                                        RngStream &rng) {
    const double d = distance(vaa_center, terminal);
    if (d == 0.0)
        throw DomainError("channel_vaa_ground: terminal below the array center");
    const std::complex<double> af =
        array_factor(vaa, angles_between(vaa_center, terminal));
    const double amp =
        std::sqrt(params.path_loss_ref * std::pow(d, -params.alpha_direct));
    return af * amp * rng.complex_normal();
}

ChannelSet realize_channels(const VaaConfig &vaa, const Vec3 &irs_pos,
                            const Vec3 &user, const Vec3 &eavesdropper,
                            const ChannelParams &params,
                            const RngStream &parent) {
    const Vec3 center = swarm_centroid(vaa.positions);
    RngStream ru = parent.child(0);
    RngStream au = parent.child(1);
    RngStream re = parent.child(2);
    RngStream ae = parent.child(3);
    ChannelSet set;
    set.h_ar = channel_vaa_irs(vaa, center, irs_pos, params);
    set.h_ru = channel_irs_ground(irs_pos, user, params, ru);
    set.h_au = channel_vaa_ground(vaa, center, user, params, au);
    set.h_re = channel_irs_ground(irs_pos, eavesdropper, params, re);
    set.h_ae = channel_vaa_ground(vaa, center, eavesdropper, params, ae);
    return set;
}

} // namespace vaairs
