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

#include "core/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "core/errors.hpp"

namespace vaairs {

namespace {

struct CenteredArray {
    std::vector<Vec3> pos; // centroid removed
    std::vector<double> w;
    double k; // wavenumber 2*pi/lambda
};

CenteredArray center(const VaaConfig &cfg) {
    cfg.validate();
    CenteredArray out;
    const Vec3 c = swarm_centroid(cfg.positions);
    out.pos.reserve(cfg.positions.size());
    for (const Vec3 &p : cfg.positions)
        out.pos.push_back(p - c);
    out.w = cfg.weights;
    out.k = 2.0 * kPi / cfg.wavelength;
    return out;
}

std::complex<double> af_direction(const CenteredArray &a, double sin_t,
                                  double cos_t, double cos_p, double sin_p) {
    const double u = sin_t * cos_p;
    const double v = sin_t * sin_p;
    double re = 0.0, im = 0.0;
    for (std::size_t m = 0; m < a.pos.size(); ++m) {
        const double phase =
            a.k * (a.pos[m].x * u + a.pos[m].y * v + a.pos[m].z * cos_t);
        re += a.w[m] * std::cos(phase);
        im += a.w[m] * std::sin(phase);
    }
    return {re, im};
}

std::size_t steps_for(double resolution) {
    if (!(resolution > 0.0))
        throw DomainError("angular resolution must be positive");
    double n = std::ceil(kPi / resolution - 1e-9);
    if (n < 1.0)
        n = 1.0;
    return static_cast<std::size_t>(n);
}

} // namespace

void VaaConfig::validate() const {
    if (positions.empty())
        throw ConfigError("VaaConfig: no elements");
    if (positions.size() != weights.size())
        throw ConfigError("VaaConfig: positions/weights size mismatch");
    if (!(wavelength > 0.0))
        throw ConfigError("VaaConfig: wavelength must be positive");
    if (!(efficiency > 0.0) || efficiency > 1.0)
        throw ConfigError("VaaConfig: efficiency must be in (0, 1]");
    for (double w : weights)
        if (!(w >= 0.0) || !(w <= 1.0))
            throw ConfigError("VaaConfig: weights must lie in [0, 1]");
}

Vec3 swarm_centroid(const std::vector<Vec3> &positions) {
    if (positions.empty())
        throw DomainError("swarm_centroid: empty set");
    Vec3 c;
    for (const Vec3 &p : positions)
        c += p;
    return c * (1.0 / static_cast<double>(positions.size()));
}

std::complex<double> array_factor(const VaaConfig &cfg,
                                  const DirectionAngles &dir) {
    const CenteredArray a = center(cfg);
    return af_direction(a, std::sin(dir.theta), std::cos(dir.theta),
                        std::cos(dir.phi), std::sin(dir.phi));
}

double radiated_power_integral(const VaaConfig &cfg, double resolution) {
    const CenteredArray a = center(cfg);
    const std::size_t nt = steps_for(resolution);
    const std::size_t np = 2 * nt;
    const double dt = kPi / static_cast<double>(nt);
    const double dp = 2.0 * kPi / static_cast<double>(np);

    std::vector<double> cos_p(np), sin_p(np);
    for (std::size_t j = 0; j < np; ++j) {
        const double phi = -kPi + (static_cast<double>(j) + 0.5) * dp;
        cos_p[j] = std::cos(phi);
        sin_p[j] = std::sin(phi);
    }

    double total = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        const double theta = (static_cast<double>(i) + 0.5) * dt;
        const double st = std::sin(theta);
        const double ct = std::cos(theta);
        double row = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            double mag2 = std::norm(af_direction(a, st, ct, cos_p[j], sin_p[j]));
            if (cfg.element_pattern) {
                const double phi =
                    -kPi + (static_cast<double>(j) + 0.5) * dp;
                const double w = cfg.element_pattern(theta, phi);
                mag2 *= w * w;
            }
            row += mag2;
        }
        total += row * st;
    }
    return total * dt * dp;
}

double directive_gain_given_integral(const VaaConfig &cfg,
                                     const DirectionAngles &dir,
                                     double integral) {
    if (!(integral > 0.0))
        throw DomainError("directive_gain: radiated power is zero "
                          "(all-zero weights?)");
    double num = std::norm(array_factor(cfg, dir));
    if (cfg.element_pattern) {
        const double w = cfg.element_pattern(dir.theta, dir.phi);
        num *= w * w;
    }
    return 4.0 * kPi * num * cfg.efficiency / integral;
}

double directive_gain(const VaaConfig &cfg, const DirectionAngles &dir,
                      double resolution) {
    return directive_gain_given_integral(
        cfg, dir, radiated_power_integral(cfg, resolution));
}

BeamPattern sample_pattern(const VaaConfig &cfg, double resolution) {
    const CenteredArray a = center(cfg);
    BeamPattern p;
    p.n_theta = steps_for(resolution);
    p.n_phi = 2 * p.n_theta;
    p.magnitude.resize((p.n_theta + 1) * (p.n_phi + 1));

    std::vector<double> cos_p(p.n_phi + 1), sin_p(p.n_phi + 1);
    for (std::size_t j = 0; j <= p.n_phi; ++j) {
        const double phi = p.phi(j);
        cos_p[j] = std::cos(phi);
        sin_p[j] = std::sin(phi);
    }
    for (std::size_t i = 0; i <= p.n_theta; ++i) {
        const double theta = p.theta(i);
        const double st = std::sin(theta);
        const double ct = std::cos(theta);
        for (std::size_t j = 0; j <= p.n_phi; ++j) {
            double mag = std::abs(af_direction(a, st, ct, cos_p[j], sin_p[j]));
            if (cfg.element_pattern)
                mag *= std::abs(cfg.element_pattern(theta, p.phi(j)));
            p.magnitude[i * (p.n_phi + 1) + j] = mag;
        }
    }
    return p;
}

double max_sidelobe_ratio(const BeamPattern &pattern,
                          const DirectionAngles &mainlobe) {
    const std::size_t rows = pattern.n_theta + 1;
    const std::size_t cols = pattern.n_phi; // canonical columns, no duplicate
    const auto val = [&](std::size_t i, std::size_t j) {
        return pattern.value(i, j % cols);
    };

    // Nearest grid node to the requested mainlobe direction.
    double ti = mainlobe.theta / kPi * static_cast<double>(pattern.n_theta);
    double pj = (mainlobe.phi + kPi) / (2.0 * kPi) *
                static_cast<double>(pattern.n_phi);
    std::size_t ci = static_cast<std::size_t>(
        std::clamp(std::llround(ti), 0ll,
                   static_cast<long long>(pattern.n_theta)));
    std::size_t cj =
        static_cast<std::size_t>(std::llround(pj)) % cols;
    const double reference = val(ci, cj); // level the ratio is quoted against

    // Hill climb to the local peak of the lobe holding that direction.
    for (;;) {
        double best = val(ci, cj);
        std::size_t bi = ci, bj = cj;
        const auto consider = [&](std::size_t i, std::size_t j) {
            const double v = val(i, j);
            if (v > best) {
                best = v;
                bi = i;
                bj = j % cols;
            }
        };
        if (ci > 0)
            consider(ci - 1, cj);
        if (ci + 1 < rows)
            consider(ci + 1, cj);
        consider(ci, (cj + 1) % cols);
        consider(ci, (cj + cols - 1) % cols);
        if (bi == ci && bj == cj)
            break;
        ci = bi;
        cj = bj;
    }

    const double peak = val(ci, cj);
    if (!(peak > 0.0) || !(reference > 0.0))
        return 1.0; // identically zero pattern: no lobe structure at all
    const double threshold = peak / std::sqrt(2.0);

    // Flood fill the mainlobe around the peak: the connected half-power cap
    // plus the monotone skirt below it, so the lobe is excluded all the way
    // down to its first null ring rather than truncated at half power.
    std::vector<char> in_main(rows * cols, 0);
    std::deque<std::pair<std::size_t, std::size_t>> queue;
    in_main[ci * cols + cj] = 1;
    queue.emplace_back(ci, cj);
    while (!queue.empty()) {
        auto [i, j] = queue.front();
        queue.pop_front();
        const double here = val(i, j);
        const auto visit = [&](std::size_t ni, std::size_t nj) {
            nj %= cols;
            if (in_main[ni * cols + nj])
                return;
            const double v = val(ni, nj);
            if (v >= threshold || v <= here) {
                in_main[ni * cols + nj] = 1;
                queue.emplace_back(ni, nj);
            }
        };
        if (i > 0)
            visit(i - 1, j);
        if (i + 1 < rows)
            visit(i + 1, j);
        visit(i, j + 1);
        visit(i, j + cols - 1);
    }

    double outside = -1.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (!in_main[i * cols + j])
                outside = std::max(outside, val(i, j));
    if (outside < 0.0)
        return 1.0; // whole sphere belongs to the mainlobe (flat pattern)
    return outside / reference;
}

double max_sidelobe_ratio(const VaaConfig &cfg, const DirectionAngles &mainlobe,
                          double resolution) {
    return max_sidelobe_ratio(sample_pattern(cfg, resolution), mainlobe);
}

} // namespace vaairs
