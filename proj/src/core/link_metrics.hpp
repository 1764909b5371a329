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

#include "core/beamforming.hpp"
#include "core/channel.hpp"
#include "core/irs.hpp"

namespace vaairs {

struct RadioParams {
    double bandwidth = 2e7;           // Hz
    double tx_power = 0.1;            // W
    double noise_psd_dbm_hz = -155.0; // thermal noise density

    double noise_power() const; // sigma^2 in W over `bandwidth`
    void validate() const;      // throws ConfigError
};

// Effective receive gain of the surface-assisted link: the cascaded
// reflection plus the direct path, normalized like a directive gain against
// the array's total radiated power integral.
double combined_gain(const Cvec &incoming, const PhaseShiftVector &shifts,
                     const Cvec &outgoing, std::complex<double> direct,
                     const VaaConfig &vaa, double radiated_integral);

double shannon_rate(double gain, const RadioParams &radio); // bit/s

// Raw difference, may be negative; reward shaping clips, metrics do not.
double secrecy_rate(double rate_user, double rate_eavesdropper);

struct SlotMetrics {
    double gain_user = 0.0;
    double gain_eve = 0.0;
    double rate_user = 0.0;    // bit/s
    double rate_eve = 0.0;     // bit/s
    double secrecy_rate = 0.0; // bit/s, raw
    double max_sidelobe = 0.0; // amplitude ratio in [0, ...]
};

// Full per-slot link budget: gains and rates for user and eavesdropper plus
// the beampattern sidelobe figure toward `mainlobe`.
SlotMetrics slot_metrics(const ChannelSet &channels,
                         const PhaseShiftVector &shifts, const VaaConfig &vaa,
                         const RadioParams &radio,
                         const DirectionAngles &mainlobe,
                         double quadrature_resolution, double sll_resolution);

} // namespace vaairs
