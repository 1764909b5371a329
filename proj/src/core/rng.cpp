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

#include "core/rng.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace vaairs {

namespace {

// splitmix64; mixes a seed+key pair into a well-spread child seed.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RngStream RngStream::child(std::uint64_t key) const {
    return RngStream(mix64(seed_ ^ mix64(key)));
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
    // 53 high bits -> double in [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
    if (n == 0)
        throw DomainError("uniform_index: n must be positive");
    // Lemire's multiply-shift; bias is < 2^-64 and deterministic everywhere.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double RngStream::normal() {
    // Box-Muller, cosine branch only. u1 in (0,1] so the log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
}

double RngStream::normal(double mean, double stddev) {
    return mean + stddev * normal();
}

std::complex<double> RngStream::complex_normal() {
    constexpr double kInvSqrt2 = 0.7071067811865475244;
    double re = normal();
    double im = normal();
    return {re * kInvSqrt2, im * kInvSqrt2};
}

} // namespace vaairs
