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
#include <cstdint>
#include <random>

namespace vaairs {

// Deterministic random stream. Every consumer of randomness owns one of
// these, derived from the run seed through `child`, so the draw order of one
// component can change without perturbing any other component.
//
// All distributions are implemented explicitly on top of the raw 64-bit
// output; none of them carries hidden state (the usual Box-Muller spare is
// discarded), so a stream's output is a pure function of (seed, #draws).
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    // Independent child stream; derivation depends only on this stream's
    // seed and `key`, never on how much has been drawn already.
    [[nodiscard]] RngStream child(std::uint64_t key) const;

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double uniform();
    // Uniform on [lo, hi).
    double uniform(double lo, double hi);
    // Uniform integer in [0, n), n > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    // Standard normal via Box-Muller, one value per call.
    double normal();
    double normal(double mean, double stddev);

    // Circularly-symmetric complex normal, unit variance (0.5 per part).
    std::complex<double> complex_normal();

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace vaairs
