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

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "core/geometry.hpp"

namespace vaairs {

// A virtual antenna array: one element per UAV, amplitude-only excitation.
// Element positions are absolute; the phase reference is the swarm centroid,
// which keeps the numbers well conditioned without changing any magnitude.
struct VaaConfig {
    std::vector<Vec3> positions;
    std::vector<double> weights; // per-element amplitudes in [0, 1]
    double wavelength = 0.12491352416666666; // 2.4 GHz carrier
    double efficiency = 1.0;                 // radiation efficiency in (0, 1]
    // Optional common element pattern w(theta, phi); empty means isotropic.
    std::function<double(double, double)> element_pattern;

    void validate() const; // throws ConfigError
};

Vec3 swarm_centroid(const std::vector<Vec3> &positions);

// Far-field array factor in the given direction (element pattern excluded).
std::complex<double> array_factor(const VaaConfig &cfg,
                                  const DirectionAngles &dir);

// Total radiated power integral of |AF * w|^2 over the full sphere,
// midpoint rule with the given angular resolution (radians).
double radiated_power_integral(const VaaConfig &cfg, double resolution);

// Directive gain 4*pi*|AF*w|^2*eta / integral. The `given_integral` variant
// reuses a precomputed integral so per-slot metric code pays for quadrature
// once.
double directive_gain(const VaaConfig &cfg, const DirectionAngles &dir,
                      double resolution);
double directive_gain_given_integral(const VaaConfig &cfg,
                                     const DirectionAngles &dir,
                                     double integral);

// |AF * w| sampled on an inclusive lat-long grid:
// theta_i = i*pi/n_theta for i in [0, n_theta],
// phi_j   = -pi + j*2*pi/n_phi for j in [0, n_phi] (last column repeats the
// first physical meridian).
struct BeamPattern {
    std::size_t n_theta = 0; // number of steps, grid has n_theta+1 rows
    std::size_t n_phi = 0;
    std::vector<double> magnitude; // (n_theta+1) x (n_phi+1), row-major

    double value(std::size_t i, std::size_t j) const {
        return magnitude[i * (n_phi + 1) + j];
    }
    double theta(std::size_t i) const {
        return kPi * static_cast<double>(i) / static_cast<double>(n_theta);
    }
    double phi(std::size_t j) const {
        return -kPi + 2.0 * kPi * static_cast<double>(j) /
                          static_cast<double>(n_phi);
    }
};

BeamPattern sample_pattern(const VaaConfig &cfg, double resolution);

// Peak sidelobe magnitude relative to |AF| at the commanded direction. The
// mainlobe region is found by hill-climbing from `mainlobe` to the local
// maximum of its lobe, then flood-filling the connected half-power cap plus
// the monotone skirt below it, down to the first null ring. A pattern with
// no point left outside the mainlobe reports 1.0. The ratio can exceed one
// when the excitation does not actually beamform toward `mainlobe`.
double max_sidelobe_ratio(const VaaConfig &cfg, const DirectionAngles &mainlobe,
                          double resolution);
double max_sidelobe_ratio(const BeamPattern &pattern,
                          const DirectionAngles &mainlobe);

} // namespace vaairs
