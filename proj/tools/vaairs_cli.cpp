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
//
// Command-line front end. Exit codes: 0 success, 2 configuration problem
// (bad flags, bad config file, bad --set), 3 runtime failure.

#include <CLI11.hpp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "vaairs.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int status_to_exit(vaairs_status s) {
    switch (s) {
    case VAAIRS_OK:
        return kExitOk;
    case VAAIRS_ERR_CONFIG:
    case VAAIRS_ERR_ARGUMENT:
        return kExitConfig;
    default:
        return kExitRuntime;
    }
}

int fail(vaairs_status s) {
    std::fprintf(stderr, "vaairs: error: %s\n", vaairs_last_error());
    return status_to_exit(s);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"UAV-swarm virtual antenna array + reflecting surface "
                 "secure-link simulator and trainer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", []() {
        return std::string(vaairs_version());
    }());

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    bool has_seed = false;
    std::uint64_t seed = 0;

    const auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path,
                        "JSON run description (empty or omitted: defaults)");
        cmd->add_option("--out", out_dir, "output directory for this run");
        cmd->add_option("--seed", seed, "override execution.seed")
            ->each([&](const std::string &) { has_seed = true; });
        cmd->add_option("--set", overrides,
                        "override one config value, key=value (repeatable)");
    };

    CLI::App *train = app.add_subcommand("train", "train policies");
    CLI::App *eval = app.add_subcommand("eval", "roll out policies and "
                                                "summarize metrics");
    CLI::App *sweep = app.add_subcommand("sweep", "train once per sweep value");
    CLI::App *exp = app.add_subcommand(
        "export", "rebuild plot tables from a finished run");
    add_common(train);
    add_common(eval);
    add_common(sweep);
    add_common(exp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const char *mode = nullptr;
    if (train->parsed())
        mode = "train";
    else if (eval->parsed())
        mode = "eval";
    else if (sweep->parsed())
        mode = "sweep";
    else if (exp->parsed())
        mode = "export";

    vaairs_config *cfg = nullptr;
    vaairs_status s = config_path.empty() ? vaairs_config_create(&cfg)
                                          : vaairs_config_load(
                                                config_path.c_str(), &cfg);
    if (s != VAAIRS_OK)
        return fail(s);
    std::unique_ptr<vaairs_config, decltype(&vaairs_config_free)> guard(
        cfg, &vaairs_config_free);

    for (const std::string &kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::fprintf(stderr, "vaairs: error: --set expects key=value, "
                                 "got '%s'\n",
                         kv.c_str());
            return kExitConfig;
        }
        s = vaairs_config_set(cfg, kv.substr(0, eq).c_str(),
                              kv.substr(eq + 1).c_str());
        if (s != VAAIRS_OK)
            return fail(s);
    }
    if (has_seed) {
        s = vaairs_config_set_seed(cfg, seed);
        if (s != VAAIRS_OK)
            return fail(s);
    }
    if (!out_dir.empty()) {
        s = vaairs_config_set_out_dir(cfg, out_dir.c_str());
        if (s != VAAIRS_OK)
            return fail(s);
    }

    s = vaairs_run(cfg, mode);
    if (s != VAAIRS_OK)
        return fail(s);
    return kExitOk;
}
