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

#include "vaairs.h"

#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/environment.hpp"
#include "core/errors.hpp"
#include "core/harness.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string &msg) { g_last_error = msg; }

// Uniform exception -> status mapping for every entry point.
template <typename Fn> vaairs_status guarded(Fn &&fn) {
    try {
        return fn();
    } catch (const vaairs::ConfigError &e) {
        set_error(e.what());
        return VAAIRS_ERR_CONFIG;
    } catch (const std::exception &e) {
        set_error(e.what());
        return VAAIRS_ERR_RUNTIME;
    } catch (...) {
        set_error("unknown failure");
        return VAAIRS_ERR_RUNTIME;
    }
}

vaairs_status bad_argument(const char *msg) {
    set_error(msg);
    return VAAIRS_ERR_ARGUMENT;
}

} // namespace

struct vaairs_config {
    vaairs::RunConfig cfg;
};

struct vaairs_env {
    explicit vaairs_env(const vaairs::RunConfig &cfg)
        : env(cfg.scenario, cfg.reward,
              vaairs::RngStream(cfg.exec.seed).child(1).seed()) {}
    vaairs::Environment env;
    bool has_episode = false;
};

extern "C" {

const char *vaairs_version(void) { return vaairs::kCodeVersion; }

const char *vaairs_last_error(void) { return g_last_error.c_str(); }

vaairs_status vaairs_config_create(vaairs_config **out) {
    if (out == nullptr)
        return bad_argument("vaairs_config_create: out is NULL");
    return guarded([&] {
        *out = new vaairs_config{vaairs::default_config()};
        return VAAIRS_OK;
    });
}

vaairs_status vaairs_config_load(const char *path, vaairs_config **out) {
    if (path == nullptr || out == nullptr)
        return bad_argument("vaairs_config_load: NULL argument");
    return guarded([&] {
        *out = new vaairs_config{vaairs::load_config_file(path)};
        return VAAIRS_OK;
    });
}

vaairs_status vaairs_config_parse(const char *text, vaairs_config **out) {
    if (text == nullptr || out == nullptr)
        return bad_argument("vaairs_config_parse: NULL argument");
    return guarded([&] {
        *out = new vaairs_config{vaairs::config_from_text(text)};
        return VAAIRS_OK;
    });
}

vaairs_status vaairs_config_set(vaairs_config *cfg, const char *dotted_key,
                                const char *value) {
    if (cfg == nullptr || dotted_key == nullptr || value == nullptr)
        return bad_argument("vaairs_config_set: NULL argument");
    return guarded([&] {
        vaairs::apply_override(cfg->cfg, dotted_key, value);
        return VAAIRS_OK;
    });
}

vaairs_status vaairs_config_set_seed(vaairs_config *cfg, uint64_t seed) {
    if (cfg == nullptr)
        return bad_argument("vaairs_config_set_seed: cfg is NULL");
    cfg->cfg.exec.seed = seed;
    return VAAIRS_OK;
}

vaairs_status vaairs_config_set_out_dir(vaairs_config *cfg, const char *path) {
    if (cfg == nullptr || path == nullptr)
        return bad_argument("vaairs_config_set_out_dir: NULL argument");
    if (path[0] == '\0') {
        set_error("execution.out_dir must not be empty");
        return VAAIRS_ERR_CONFIG;
    }
    cfg->cfg.exec.out_dir = path;
    return VAAIRS_OK;
}

vaairs_status vaairs_config_dump(const vaairs_config *cfg, char *buf,
                                 size_t cap, size_t *needed) {
    if (cfg == nullptr || needed == nullptr)
        return bad_argument("vaairs_config_dump: NULL argument");
    return guarded([&] {
        const std::string text = vaairs::config_to_text(cfg->cfg);
        *needed = text.size();
        if (buf != nullptr && cap > 0) {
            const size_t n = text.size() < cap - 1 ? text.size() : cap - 1;
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
        return VAAIRS_OK;
    });
}

vaairs_status vaairs_config_hash(const vaairs_config *cfg, char out[17]) {
    if (cfg == nullptr || out == nullptr)
        return bad_argument("vaairs_config_hash: NULL argument");
    return guarded([&] {
        const std::string hex = vaairs::config_hash_hex(cfg->cfg);
        std::memcpy(out, hex.c_str(), 17);
        return VAAIRS_OK;
    });
}

void vaairs_config_free(vaairs_config *cfg) { delete cfg; }

vaairs_status vaairs_run(const vaairs_config *cfg, const char *mode) {
    if (cfg == nullptr || mode == nullptr)
        return bad_argument("vaairs_run: NULL argument");
    return guarded([&] {
        (void)vaairs::run(cfg->cfg, vaairs::run_mode_from_string(mode));
        return VAAIRS_OK;
    });
}

vaairs_status vaairs_env_create(const vaairs_config *cfg, vaairs_env **out) {
    if (cfg == nullptr || out == nullptr)
        return bad_argument("vaairs_env_create: NULL argument");
    return guarded([&] {
        *out = new vaairs_env(cfg->cfg);
        return VAAIRS_OK;
    });
}

vaairs_status vaairs_env_reset(vaairs_env *env) {
    if (env == nullptr)
        return bad_argument("vaairs_env_reset: env is NULL");
    return guarded([&] {
        (void)env->env.reset();
        env->has_episode = true;
        return VAAIRS_OK;
    });
}

vaairs_status vaairs_env_num_agents(const vaairs_env *env, int32_t *out) {
    if (env == nullptr || out == nullptr)
        return bad_argument("vaairs_env_num_agents: NULL argument");
    *out = env->env.num_agents();
    return VAAIRS_OK;
}

vaairs_status vaairs_env_obs_dim(const vaairs_env *env, int32_t *out) {
    if (env == nullptr || out == nullptr)
        return bad_argument("vaairs_env_obs_dim: NULL argument");
    *out = env->env.obs_dim();
    return VAAIRS_OK;
}

vaairs_status vaairs_env_observe(const vaairs_env *env, double *buf,
                                 size_t len) {
    if (env == nullptr || buf == nullptr)
        return bad_argument("vaairs_env_observe: NULL argument");
    if (len != static_cast<size_t>(env->env.obs_dim()))
        return bad_argument("vaairs_env_observe: len != obs_dim");
    return guarded([&] {
        const Eigen::VectorXd obs = env->env.observe();
        std::memcpy(buf, obs.data(), sizeof(double) * len);
        return VAAIRS_OK;
    });
}

vaairs_status vaairs_env_step(vaairs_env *env, const double *actions,
                              size_t actions_len, double *rewards,
                              size_t rewards_len, vaairs_step_info *info) {
    if (env == nullptr || actions == nullptr || rewards == nullptr)
        return bad_argument("vaairs_env_step: NULL argument");
    const size_t n = static_cast<size_t>(env->env.num_agents());
    if (actions_len != n * 4)
        return bad_argument("vaairs_env_step: actions_len != num_agents * 4");
    if (rewards_len != n)
        return bad_argument("vaairs_env_step: rewards_len != num_agents");
    return guarded([&] {
        std::vector<vaairs::UavAction> cmds(n);
        for (size_t m = 0; m < n; ++m) {
            cmds[m].weight = actions[4 * m + 0];
            cmds[m].speed = actions[4 * m + 1];
            cmds[m].direction = actions[4 * m + 2];
            cmds[m].climb = actions[4 * m + 3];
        }
        const vaairs::StepResult res = env->env.step(cmds);
        for (size_t m = 0; m < n; ++m)
            rewards[m] = res.rewards[m];
        if (info != nullptr) {
            info->rate_user_bps = res.metrics.rate_user;
            info->rate_eve_bps = res.metrics.rate_eve;
            info->secrecy_rate_bps = res.metrics.secrecy_rate;
            info->max_sidelobe = res.metrics.max_sidelobe;
            info->total_energy_j = res.total_energy;
            int32_t v = 0;
            for (size_t m = 0; m < n; ++m)
                if (res.boundary_violation[m] != 0 ||
                    res.collision_count[m] > 0)
                    ++v;
            info->violations = v;
            info->done = res.done ? 1 : 0;
        }
        return VAAIRS_OK;
    });
}

void vaairs_env_free(vaairs_env *env) { delete env; }

} // extern "C"
