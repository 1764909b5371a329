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

#include "core/link_metrics.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace vaairs {

double RadioParams::noise_power() const {
    // dBm/Hz -> W/Hz -> W over the whole band
    return std::pow(10.0, (noise_psd_dbm_hz - 30.0) / 10.0) * bandwidth;
}

void RadioParams::validate() const {
    if (!(bandwidth > 0.0))
        throw ConfigError("RadioParams: bandwidth must be positive");
    if (!(tx_power > 0.0))
        throw ConfigError("RadioParams: tx_power must be positive");
}

double combined_gain(const Cvec &incoming, const PhaseShiftVector &shifts,
                     const Cvec &outgoing, std::complex<double> direct,
                     const VaaConfig &vaa, double radiated_integral) {
    if (!(radiated_integral > 0.0))
        throw DomainError("combined_gain: radiated power is zero");
    const std::complex<double> total =
        reflection_apply(shifts, incoming, outgoing) + direct;
    return 4.0 * kPi * std::norm(total) * vaa.efficiency / radiated_integral;
}

double shannon_rate(double gain, const RadioParams &radio) {
    if (gain < 0.0)
        throw DomainError("shannon_rate: negative gain");
    const double snr = radio.tx_power * gain / radio.noise_power();
    return radio.bandwidth * std::log2(1.0 + snr);
}

double secrecy_rate(double rate_user, double rate_eavesdropper) {
    return rate_user - rate_eavesdropper;
}

SlotMetrics slot_metrics(const ChannelSet &channels,
                         const PhaseShiftVector &shifts, const VaaConfig &vaa,
                         const RadioParams &radio,
                         const DirectionAngles &mainlobe,
                         double quadrature_resolution, double sll_resolution) {
    radio.validate();
    const double integral = radiated_power_integral(vaa, quadrature_resolution);
    SlotMetrics m;
    m.gain_user = combined_gain(channels.h_ar, shifts, channels.h_ru,
                                channels.h_au, vaa, integral);
    m.gain_eve = combined_gain(channels.h_ar, shifts, channels.h_re,
                               channels.h_ae, vaa, integral);
    m.rate_user = shannon_rate(m.gain_user, radio);
    m.rate_eve = shannon_rate(m.gain_eve, radio);
    m.secrecy_rate = secrecy_rate(m.rate_user, m.rate_eve);
    m.max_sidelobe = max_sidelobe_ratio(vaa, mainlobe, sll_resolution);
    return m;
}

} // namespace vaairs
