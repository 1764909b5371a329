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

#include "core/irs.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace vaairs {

double wrap_phase(double radians) {
    const double two_pi = 2.0 * kPi;
    double w = std::fmod(radians, two_pi);
    if (w < 0.0)
        w += two_pi;
    return w;
}

std::complex<double> reflection_apply(const PhaseShiftVector &shifts,
                                      const Cvec &incoming,
                                      const Cvec &outgoing) {
    if (shifts.phases.size() != incoming.size() ||
        incoming.size() != outgoing.size())
        throw DomainError("reflection_apply: size mismatch");
    std::complex<double> acc = 0.0;
    for (Eigen::Index s = 0; s < incoming.size(); ++s) {
        const std::complex<double> rot(std::cos(shifts.phases(s)),
                                       std::sin(shifts.phases(s)));
        acc += outgoing(s) * rot * incoming(s);
    }
    return acc;
}

PhaseShiftVector closed_form_phases(const LinkTrig &incoming,
                                    const LinkTrig &outgoing,
                                    const ChannelParams &params) {
    params.validate();
    const int n = params.num_elements();
    const double k = 2.0 * kPi / params.wavelength;
    PhaseShiftVector out;
    out.phases.resize(n);
    const double row_term = incoming.cos_horizontal * incoming.sin_vertical +
                            outgoing.cos_horizontal * outgoing.sin_vertical;
    const double col_term = incoming.sin_horizontal * incoming.sin_vertical +
                            outgoing.sin_horizontal * outgoing.sin_vertical;
    for (int s = 1; s <= n; ++s) {
        const int sr = (s - 1) / params.rows;
        const int sc = (s - 1) % params.rows;
        out.phases(s - 1) = wrap_phase(k * (sr * params.row_spacing * row_term +
                                            sc * params.col_spacing * col_term));
    }
    return out;
}

} // namespace vaairs
