/* SPDX-License-Identifier: Apache-2.0
 *
 * vaairs - secure aerial relay simulator
 * Copyright (C) 2026 vaairs developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *
 * C interface of the vaairs shared library. All entry points return a
 * vaairs_status; on any non-zero return, vaairs_last_error() describes the
 * failure. Handles are opaque and must be released with the matching
 * *_free() call. The library keeps no global state besides the thread-local
 * error message, and every run is deterministic in the configured seed.
 */

#ifndef VAAIRS_H
#define VAAIRS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define VAAIRS_API __declspec(dllexport)
#else
#define VAAIRS_API __attribute__((visibility("default")))
#endif

typedef enum vaairs_status {
    VAAIRS_OK = 0,
    VAAIRS_ERR_CONFIG = 2,   /* invalid configuration or config file */
    VAAIRS_ERR_RUNTIME = 3,  /* failure while executing a run */
    VAAIRS_ERR_ARGUMENT = 4  /* null handle, bad buffer size, ... */
} vaairs_status;

typedef struct vaairs_config vaairs_config;
typedef struct vaairs_env vaairs_env;

/* Library semantic version, e.g. "0.1.0". Static storage; do not free. */
VAAIRS_API const char *vaairs_version(void);

/* Message of the most recent failure on this thread; empty string if none.
 * Static storage; valid until the next failing call on the same thread. */
VAAIRS_API const char *vaairs_last_error(void);

/* --- configuration ------------------------------------------------------ */

/* Fresh configuration with every field at its default. */
VAAIRS_API vaairs_status vaairs_config_create(vaairs_config **out);

/* Load a JSON run description; an empty file yields the defaults. */
VAAIRS_API vaairs_status vaairs_config_load(const char *path,
                                            vaairs_config **out);

/* Parse a JSON run description from memory ("" yields the defaults). */
VAAIRS_API vaairs_status vaairs_config_parse(const char *text,
                                             vaairs_config **out);

/* Set one value by dotted path, e.g. ("scenario.num_uavs", "4") or
 * ("execution.algorithm", "random"). The value is parsed as JSON when
 * possible and taken as a plain string otherwise. */
VAAIRS_API vaairs_status vaairs_config_set(vaairs_config *cfg,
                                           const char *dotted_key,
                                           const char *value);

VAAIRS_API vaairs_status vaairs_config_set_seed(vaairs_config *cfg,
                                                uint64_t seed);
VAAIRS_API vaairs_status vaairs_config_set_out_dir(vaairs_config *cfg,
                                                   const char *path);

/* Canonical JSON of the resolved configuration. Writes up to `cap` bytes
 * including the terminator into `buf`; *needed receives the full length
 * (excluding the terminator) regardless. `buf` may be NULL when cap is 0. */
VAAIRS_API vaairs_status vaairs_config_dump(const vaairs_config *cfg,
                                            char *buf, size_t cap,
                                            size_t *needed);

/* 16 hex digits + terminator identifying the configuration's content. */
VAAIRS_API vaairs_status vaairs_config_hash(const vaairs_config *cfg,
                                            char out[17]);

VAAIRS_API void vaairs_config_free(vaairs_config *cfg);

/* --- runs ---------------------------------------------------------------- */

/* Execute one run; `mode` is "train", "eval", "sweep" or "export". Output
 * files are written under the configuration's execution.out_dir. */
VAAIRS_API vaairs_status vaairs_run(const vaairs_config *cfg,
                                    const char *mode);

/* --- direct environment access ------------------------------------------ */

/* Step metrics of the most recent slot. */
typedef struct vaairs_step_info {
    double rate_user_bps;
    double rate_eve_bps;
    double secrecy_rate_bps; /* raw difference, may be negative */
    double max_sidelobe;     /* beampattern peak-sidelobe ratio */
    double total_energy_j;   /* whole-swarm energy of this slot */
    int32_t violations;      /* agents that hit a bound or collided */
    int32_t done;            /* 1 when the episode just ended */
} vaairs_step_info;

/* Simulation environment built from the configuration's scenario, reward
 * and seed (same derivation as a "train" run uses). */
VAAIRS_API vaairs_status vaairs_env_create(const vaairs_config *cfg,
                                           vaairs_env **out);

/* Begins the next episode. Must be called before the first step. */
VAAIRS_API vaairs_status vaairs_env_reset(vaairs_env *env);

VAAIRS_API vaairs_status vaairs_env_num_agents(const vaairs_env *env,
                                               int32_t *out);
VAAIRS_API vaairs_status vaairs_env_obs_dim(const vaairs_env *env,
                                            int32_t *out);

/* Copies the shared observation (all values in [-1, 1]) into `buf`;
 * `len` must equal the value reported by vaairs_env_obs_dim. */
VAAIRS_API vaairs_status vaairs_env_observe(const vaairs_env *env, double *buf,
                                            size_t len);

/* Advances one slot. `actions` holds num_agents * 4 doubles, row-major per
 * agent: excitation weight [0,1], horizontal speed [m/s], heading [rad],
 * vertical displacement [m]; out-of-range commands are clipped. `rewards`
 * receives num_agents values. `info` may be NULL. */
VAAIRS_API vaairs_status vaairs_env_step(vaairs_env *env,
                                         const double *actions,
                                         size_t actions_len, double *rewards,
                                         size_t rewards_len,
                                         vaairs_step_info *info);

VAAIRS_API void vaairs_env_free(vaairs_env *env);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VAAIRS_H */
