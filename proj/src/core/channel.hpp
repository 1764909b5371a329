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
#include <complex>

#include "core/beamforming.hpp"
#include "core/geometry.hpp"
#include "core/rng.hpp"

namespace vaairs {

using Cvec = Eigen::VectorXcd;

// Radio propagation constants shared by all links, plus the reflecting
// surface layout (uniform planar array on a vertical wall).
struct ChannelParams {
    double path_loss_ref = 1e-3; // channel power gain at 1 m
    double alpha_direct = 3.6;   // array -> ground exponent
    double alpha_reflect = 2.7;  // surface -> ground exponent
    double rician_k = 3.0;       // LoS/NLoS power ratio of reflected links
    double wavelength = 0.12491352416666666;
    int rows = 6; // N_S^R
    int cols = 10;
    double row_spacing = 0.5 * 0.12491352416666666;
    double col_spacing = 0.5 * 0.12491352416666666;

    int num_elements() const { return rows * cols; }
    void validate() const; // throws ConfigError
};

// Planar-array steering vector for the given link bearing. Elements are
// enumerated s = 1..N with s_r = (s-1) / rows and s_c = (s-1) % rows; the
// closed-form reflection policy in irs.hpp uses the identical enumeration,
// which is what makes its phase alignment exact.
Cvec steering_vector(const LinkTrig &trig, const ChannelParams &params);

// Deterministic line-of-sight link from the array to the surface, amplitude
// AF * sqrt(rho) / d, one entry per surface element.
Cvec channel_vaa_irs(const VaaConfig &vaa, const Vec3 &vaa_center,
                     const Vec3 &irs_pos, const ChannelParams &params);

// Rician link from the surface to a ground terminal.
Cvec channel_irs_ground(const Vec3 &irs_pos, const Vec3 &terminal,
                        const ChannelParams &params, RngStream &rng);

// Rayleigh-faded scalar link from the array straight to a ground terminal.
std::complex<double> channel_vaa_ground(const VaaConfig &vaa,
                                        const Vec3 &vaa_center,
                                        const Vec3 &terminal,
                                        const ChannelParams &params,
                                        RngStream &rng);

// Everything the link budget needs for one slot: array->surface,
// surface->user/eavesdropper, array->user/eavesdropper.
struct ChannelSet {
    Cvec h_ar;
    Cvec h_ru;
    Cvec h_re;
    std::complex<double> h_au;
    std::complex<double> h_ae;
};

// Draws all random links from child streams of `parent` (fixed keys, fixed
// order), so one slot's realization is a pure function of the parent seed
// and the geometry.
ChannelSet realize_channels(const VaaConfig &vaa, const Vec3 &irs_pos,
                            const Vec3 &user, const Vec3 &eavesdropper,
                            const ChannelParams &params,
                            const RngStream &parent);

} // namespace vaairs
