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

#include <cstdint>
#include <string>
#include <vector>

#include "core/environment.hpp"
#include "core/trainer.hpp"

namespace vaairs {

struct SweepSpec {
    std::string key;            // dotted config path, e.g. scenario.num_uavs
    std::vector<double> values; // one child run per value
};

struct ExecutionParams {
    std::uint64_t seed = 1;
    std::string out_dir = "runs/out";
    std::string algorithm = "hmca"; // hmca | masac_plain | random
    int eval_episodes = 10;
    std::string checkpoint; // optional warm start / eval source
};

struct RunConfig {
    ScenarioParams scenario;
    RewardWeights reward;
    TrainerConfig trainer;
    ExecutionParams exec;
    SweepSpec sweep;

    void validate() const; // throws ConfigError
};

RunConfig default_config();

// Parses a JSON run description. Empty (or whitespace-only) text yields the
// defaults. Unknown keys anywhere are rejected; `null` means "use the
// default" for the nullable fields (element spacings, reward reference).
RunConfig config_from_text(const std::string &text);
RunConfig load_config_file(const std::string &path);

// Canonical serialization; includes every field with its resolved value.
std::string config_to_text(const RunConfig &config);

// Applies one `--set key=value` style override (value parsed as JSON when
// possible, else taken as a string) and re-validates.
void apply_override(RunConfig &config, const std::string &dotted_key,
                    const std::string &value);

// FNV-1a over the canonical serialization, as fixed-width hex.
std::string config_hash_hex(const RunConfig &config);

} // namespace vaairs
