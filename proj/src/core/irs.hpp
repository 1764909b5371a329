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

#include "core/channel.hpp"
#include "core/geometry.hpp"

namespace vaairs {

// Per-element reflection phases, wrapped to [0, 2*pi).
struct PhaseShiftVector {
    Eigen::VectorXd phases;
};

double wrap_phase(double radians); // into [0, 2*pi)

// Cascaded scalar channel through the surface:
// sum_s outgoing_s * exp(j*w_s) * incoming_s.
std::complex<double> reflection_apply(const PhaseShiftVector &shifts,
                                      const Cvec &incoming,
                                      const Cvec &outgoing);

// Reflection phases that cancel the steering phases of the incoming and
// outgoing bearings element by element. Uses the same element enumeration as
// steering_vector, so the aligned cascade is exactly co-phased: every term of
// reflection_apply with line-of-sight factors ends up with phase zero.
PhaseShiftVector closed_form_phases(const LinkTrig &incoming,
                                    const LinkTrig &outgoing,
                                    const ChannelParams &params);

} // namespace vaairs
