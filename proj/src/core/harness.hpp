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

#include <string>
#include <vector>

#include "core/config.hpp"

namespace vaairs {

inline constexpr const char *kCodeVersion = "0.1.0";

enum class RunMode { Train, Eval, Sweep, Export };

RunMode run_mode_from_string(const std::string &name); // throws ConfigError
std::string run_mode_name(RunMode mode);

struct SweepChildSummary {
    double value = 0.0;
    std::string dir;
    double reward50 = 0.0;
    double secrecy50 = 0.0;
    double sidelobe50 = 0.0;
    double energy50 = 0.0;
    double violations50 = 0.0;
};

struct RunOutcome {
    RunMode mode = RunMode::Train;
    std::string out_dir;
    std::vector<std::string> files; // paths written, relative to out_dir

    // Train / sweep children: means over the final (up to) 50 episodes.
    double final50_reward = 0.0;
    double final50_secrecy_mbps = 0.0;
    double final50_sidelobe = 0.0;
    double final50_energy_kj = 0.0;

    EvalSummary eval; // eval mode

    std::vector<SweepChildSummary> children; // sweep mode
    bool secrecy_nondecreasing = false;
    double energy_growth_ratio = 0.0; // last value's energy over first's
};

// Dispatches one run. Creates exec.out_dir (and parents), writes the
// resolved config, the mode's data files and a manifest.json describing
// them. Deterministic for a fixed config: reruns produce byte-identical
// data files.
RunOutcome run(const RunConfig &config, RunMode mode);

// Rebuilds plot-ready tables from a finished training run directory
// (reads metrics.csv, writes plots/convergence.csv and plots/summary.csv).
std::vector<std::string> export_plot_data(const std::string &run_dir);

// Trailing moving average over a window of the given size (>= 1); entry i
// averages the last min(window, i+1) values. Window 1 echoes the input.
std::vector<double> trailing_mean(const std::vector<double> &xs, int window);

} // namespace vaairs
