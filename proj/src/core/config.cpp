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

#include "core/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "core/errors.hpp"

namespace vaairs {

namespace {

using nlohmann::json;

constexpr double kSpeedOfLight = 299792458.0;

json vec3_to_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json &j, const std::string &where) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(where + ": expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// Pull a value out of `j` if present (it has already been checked against
// the template for unknown keys).
template <typename T>
void fetch(const json &j, const char *key, T &into, const std::string &scope) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return;
    try {
        into = it->get<T>();
    } catch (const json::exception &e) {
        throw ConfigError(scope + "." + key + ": " + e.what());
    }
}

void reject_unknown_keys(const json &input, const json &tmpl,
                         const std::string &path) {
    if (!input.is_object())
        return;
    if (!tmpl.is_object())
        throw ConfigError("config: '" + path + "' does not take nested keys");
    for (const auto &[key, value] : input.items()) {
        if (!tmpl.contains(key))
            throw ConfigError("config: unknown key '" +
                              (path.empty() ? key : path + "." + key) + "'");
        if (value.is_object())
            reject_unknown_keys(value, tmpl.at(key),
                                path.empty() ? key : path + "." + key);
    }
}

json config_to_json(const RunConfig &c) {
    json j;
    json &s = j["scenario"];
    s["num_uavs"] = c.scenario.num_uavs;
    s["area_x"] = json::array({c.scenario.area.x_min, c.scenario.area.x_max});
    s["area_y"] = json::array({c.scenario.area.y_min, c.scenario.area.y_max});
    s["altitude"] = json::array({c.scenario.alt_min, c.scenario.alt_max});
    s["min_separation"] = c.scenario.min_separation;
    s["irs_position"] = vec3_to_json(c.scenario.irs_position);
    s["v_max"] = c.scenario.v_max;
    s["climb_max"] = c.scenario.climb_max;
    s["horizon"] = c.scenario.horizon;
    s["slot_seconds"] = c.scenario.slot_seconds;
    s["efficiency"] = c.scenario.efficiency;
    s["quadrature_deg"] = c.scenario.quadrature_deg;
    s["sll_grid_deg"] = c.scenario.sll_grid_deg;

    json &ch = s["channel"];
    ch["carrier_ghz"] =
        kSpeedOfLight / c.scenario.channel.wavelength / 1e9;
    ch["path_loss_ref"] = c.scenario.channel.path_loss_ref;
    ch["alpha_direct"] = c.scenario.channel.alpha_direct;
    ch["alpha_reflect"] = c.scenario.channel.alpha_reflect;
    ch["rician_k"] = c.scenario.channel.rician_k;
    ch["irs_rows"] = c.scenario.channel.rows;
    ch["irs_cols"] = c.scenario.channel.cols;
    ch["row_spacing"] = c.scenario.channel.row_spacing;
    ch["col_spacing"] = c.scenario.channel.col_spacing;

    json &ra = s["radio"];
    ra["bandwidth"] = c.scenario.radio.bandwidth;
    ra["tx_power"] = c.scenario.radio.tx_power;
    ra["noise_psd_dbm_hz"] = c.scenario.radio.noise_psd_dbm_hz;

    json &pr = s["propulsion"];
    pr["blade_power"] = c.scenario.propulsion.blade_power;
    pr["induced_power"] = c.scenario.propulsion.induced_power;
    pr["tip_speed"] = c.scenario.propulsion.tip_speed;
    pr["hover_induced_speed"] = c.scenario.propulsion.hover_induced_speed;
    pr["fuselage_drag_ratio"] = c.scenario.propulsion.fuselage_drag_ratio;
    pr["rotor_solidity"] = c.scenario.propulsion.rotor_solidity;
    pr["air_density"] = c.scenario.propulsion.air_density;
    pr["rotor_disc_area"] = c.scenario.propulsion.rotor_disc_area;
    pr["mass"] = c.scenario.propulsion.mass;
    pr["gravity"] = c.scenario.propulsion.gravity;

    json &wk = s["walker"];
    wk["memory"] = c.scenario.walker.memory;
    wk["mean_speed"] = c.scenario.walker.mean_speed;
    wk["mean_direction"] = c.scenario.walker.mean_direction;
    wk["noise_std"] = c.scenario.walker.noise_std;

    json &r = j["reward"];
    r["secrecy_weight"] = c.reward.secrecy_weight;
    r["sidelobe_weight"] = c.reward.sidelobe_weight;
    r["energy_weight"] = c.reward.energy_weight;
    r["boundary_penalty"] = c.reward.boundary_penalty;
    r["collision_penalty"] = c.reward.collision_penalty;
    r["direction_bonus"] = c.reward.direction_bonus;
    r["position_penalty"] = c.reward.position_penalty;
    r["reference"] =
        c.reward.has_reference ? vec3_to_json(c.reward.reference) : json();

    json &t = j["trainer"];
    t["episodes"] = c.trainer.episodes;
    t["updates_per_step"] = c.trainer.updates_per_step;
    t["batch_size"] = c.trainer.batch_size;
    t["learning_rate"] = c.trainer.learning_rate;
    t["tau"] = c.trainer.tau;
    t["alpha"] = c.trainer.alpha;
    t["gamma"] = c.trainer.gamma;
    t["hidden_width"] = c.trainer.hidden_width;
    t["attention_dim"] = c.trainer.attention_dim;
    t["buffer_capacity"] = c.trainer.buffer_capacity;
    t["warmup_transitions"] = c.trainer.warmup_transitions;
    t["gravity_noise_std"] = c.trainer.gravity_noise_std;
    t["grad_clip"] = c.trainer.grad_clip;

    json &e = j["execution"];
    e["seed"] = c.exec.seed;
    e["out_dir"] = c.exec.out_dir;
    e["algorithm"] = c.exec.algorithm;
    e["eval_episodes"] = c.exec.eval_episodes;
    e["checkpoint"] = c.exec.checkpoint;

    json &sw = j["sweep"];
    sw["key"] = c.sweep.key;
    sw["values"] = c.sweep.values;
    return j;
}

RunConfig config_from_json(const json &j) {
    RunConfig c; // defaults
    reject_unknown_keys(j, config_to_json(c), "");

    if (j.contains("scenario")) {
        const json &s = j.at("scenario");
        fetch(s, "num_uavs", c.scenario.num_uavs, "scenario");
        if (s.contains("area_x") && !s.at("area_x").is_null()) {
            const json &a = s.at("area_x");
            if (!a.is_array() || a.size() != 2)
                throw ConfigError("scenario.area_x: expected [min, max]");
            c.scenario.area.x_min = a[0].get<double>();
            c.scenario.area.x_max = a[1].get<double>();
        }
        if (s.contains("area_y") && !s.at("area_y").is_null()) {
            const json &a = s.at("area_y");
            if (!a.is_array() || a.size() != 2)
                throw ConfigError("scenario.area_y: expected [min, max]");
            c.scenario.area.y_min = a[0].get<double>();
            c.scenario.area.y_max = a[1].get<double>();
        }
        if (s.contains("altitude") && !s.at("altitude").is_null()) {
            const json &a = s.at("altitude");
            if (!a.is_array() || a.size() != 2)
                throw ConfigError("scenario.altitude: expected [min, max]");
            c.scenario.alt_min = a[0].get<double>();
            c.scenario.alt_max = a[1].get<double>();
        }
        fetch(s, "min_separation", c.scenario.min_separation, "scenario");
        if (s.contains("irs_position") && !s.at("irs_position").is_null())
            c.scenario.irs_position =
                vec3_from_json(s.at("irs_position"), "scenario.irs_position");
        fetch(s, "v_max", c.scenario.v_max, "scenario");
        fetch(s, "climb_max", c.scenario.climb_max, "scenario");
        fetch(s, "horizon", c.scenario.horizon, "scenario");
        fetch(s, "slot_seconds", c.scenario.slot_seconds, "scenario");
        fetch(s, "efficiency", c.scenario.efficiency, "scenario");
        fetch(s, "quadrature_deg", c.scenario.quadrature_deg, "scenario");
        fetch(s, "sll_grid_deg", c.scenario.sll_grid_deg, "scenario");

        if (s.contains("channel")) {
            const json &ch = s.at("channel");
            double carrier_ghz =
                kSpeedOfLight / c.scenario.channel.wavelength / 1e9;
            fetch(ch, "carrier_ghz", carrier_ghz, "scenario.channel");
            if (!(carrier_ghz > 0.0))
                throw ConfigError("scenario.channel.carrier_ghz: must be "
                                  "positive");
            c.scenario.channel.wavelength =
                kSpeedOfLight / (carrier_ghz * 1e9);
            fetch(ch, "path_loss_ref", c.scenario.channel.path_loss_ref,
                  "scenario.channel");
            fetch(ch, "alpha_direct", c.scenario.channel.alpha_direct,
                  "scenario.channel");
            fetch(ch, "alpha_reflect", c.scenario.channel.alpha_reflect,
                  "scenario.channel");
            fetch(ch, "rician_k", c.scenario.channel.rician_k,
                  "scenario.channel");
            fetch(ch, "irs_rows", c.scenario.channel.rows, "scenario.channel");
            fetch(ch, "irs_cols", c.scenario.channel.cols, "scenario.channel");
            // Spacings default to half the (possibly overridden) wavelength.
            c.scenario.channel.row_spacing = 0.5 * c.scenario.channel.wavelength;
            c.scenario.channel.col_spacing = 0.5 * c.scenario.channel.wavelength;
            fetch(ch, "row_spacing", c.scenario.channel.row_spacing,
                  "scenario.channel");
            fetch(ch, "col_spacing", c.scenario.channel.col_spacing,
                  "scenario.channel");
        } else {
            c.scenario.channel.row_spacing = 0.5 * c.scenario.channel.wavelength;
            c.scenario.channel.col_spacing = 0.5 * c.scenario.channel.wavelength;
        }

        if (s.contains("radio")) {
            const json &ra = s.at("radio");
            fetch(ra, "bandwidth", c.scenario.radio.bandwidth, "scenario.radio");
            fetch(ra, "tx_power", c.scenario.radio.tx_power, "scenario.radio");
            fetch(ra, "noise_psd_dbm_hz", c.scenario.radio.noise_psd_dbm_hz,
                  "scenario.radio");
        }
        if (s.contains("propulsion")) {
            const json &pr = s.at("propulsion");
            fetch(pr, "blade_power", c.scenario.propulsion.blade_power,
                  "scenario.propulsion");
            fetch(pr, "induced_power", c.scenario.propulsion.induced_power,
                  "scenario.propulsion");
            fetch(pr, "tip_speed", c.scenario.propulsion.tip_speed,
                  "scenario.propulsion");
            fetch(pr, "hover_induced_speed",
                  c.scenario.propulsion.hover_induced_speed,
                  "scenario.propulsion");
            fetch(pr, "fuselage_drag_ratio",
                  c.scenario.propulsion.fuselage_drag_ratio,
                  "scenario.propulsion");
            fetch(pr, "rotor_solidity", c.scenario.propulsion.rotor_solidity,
                  "scenario.propulsion");
            fetch(pr, "air_density", c.scenario.propulsion.air_density,
                  "scenario.propulsion");
            fetch(pr, "rotor_disc_area", c.scenario.propulsion.rotor_disc_area,
                  "scenario.propulsion");
            fetch(pr, "mass", c.scenario.propulsion.mass, "scenario.propulsion");
            fetch(pr, "gravity", c.scenario.propulsion.gravity,
                  "scenario.propulsion");
        }
        if (s.contains("walker")) {
            const json &wk = s.at("walker");
            fetch(wk, "memory", c.scenario.walker.memory, "scenario.walker");
            fetch(wk, "mean_speed", c.scenario.walker.mean_speed,
                  "scenario.walker");
            fetch(wk, "mean_direction", c.scenario.walker.mean_direction,
                  "scenario.walker");
            fetch(wk, "noise_std", c.scenario.walker.noise_std,
                  "scenario.walker");
        }
    } else {
        c.scenario.channel.row_spacing = 0.5 * c.scenario.channel.wavelength;
        c.scenario.channel.col_spacing = 0.5 * c.scenario.channel.wavelength;
    }

    if (j.contains("reward")) {
        const json &r = j.at("reward");
        fetch(r, "secrecy_weight", c.reward.secrecy_weight, "reward");
        fetch(r, "sidelobe_weight", c.reward.sidelobe_weight, "reward");
        fetch(r, "energy_weight", c.reward.energy_weight, "reward");
        fetch(r, "boundary_penalty", c.reward.boundary_penalty, "reward");
        fetch(r, "collision_penalty", c.reward.collision_penalty, "reward");
        fetch(r, "direction_bonus", c.reward.direction_bonus, "reward");
        fetch(r, "position_penalty", c.reward.position_penalty, "reward");
        if (r.contains("reference") && !r.at("reference").is_null()) {
            c.reward.reference =
                vec3_from_json(r.at("reference"), "reward.reference");
            c.reward.has_reference = true;
        }
    }

    if (j.contains("trainer")) {
        const json &t = j.at("trainer");
        fetch(t, "episodes", c.trainer.episodes, "trainer");
        fetch(t, "updates_per_step", c.trainer.updates_per_step, "trainer");
        fetch(t, "batch_size", c.trainer.batch_size, "trainer");
        fetch(t, "learning_rate", c.trainer.learning_rate, "trainer");
        fetch(t, "tau", c.trainer.tau, "trainer");
        fetch(t, "alpha", c.trainer.alpha, "trainer");
        fetch(t, "gamma", c.trainer.gamma, "trainer");
        fetch(t, "hidden_width", c.trainer.hidden_width, "trainer");
        fetch(t, "attention_dim", c.trainer.attention_dim, "trainer");
        fetch(t, "buffer_capacity", c.trainer.buffer_capacity, "trainer");
        fetch(t, "warmup_transitions", c.trainer.warmup_transitions, "trainer");
        fetch(t, "gravity_noise_std", c.trainer.gravity_noise_std, "trainer");
        fetch(t, "grad_clip", c.trainer.grad_clip, "trainer");
    }

    if (j.contains("execution")) {
        const json &e = j.at("execution");
        fetch(e, "seed", c.exec.seed, "execution");
        fetch(e, "out_dir", c.exec.out_dir, "execution");
        fetch(e, "algorithm", c.exec.algorithm, "execution");
        fetch(e, "eval_episodes", c.exec.eval_episodes, "execution");
        fetch(e, "checkpoint", c.exec.checkpoint, "execution");
    }

    if (j.contains("sweep")) {
        const json &sw = j.at("sweep");
        fetch(sw, "key", c.sweep.key, "sweep");
        fetch(sw, "values", c.sweep.values, "sweep");
    }

    c.validate();
    return c;
}

} // namespace

void RunConfig::validate() const {
    scenario.validate();
    reward.validate();
    trainer.validate();
    (void)algorithm_from_string(exec.algorithm);
    if (exec.eval_episodes < 1)
        throw ConfigError("execution.eval_episodes must be >= 1");
    if (exec.out_dir.empty())
        throw ConfigError("execution.out_dir must not be empty");
    if (trainer.batch_size > trainer.buffer_capacity)
        throw ConfigError("trainer.batch_size exceeds buffer_capacity");
}

RunConfig default_config() {
    RunConfig c;
    c.scenario.channel.row_spacing = 0.5 * c.scenario.channel.wavelength;
    c.scenario.channel.col_spacing = 0.5 * c.scenario.channel.wavelength;
    return c;
}

RunConfig config_from_text(const std::string &text) {
    bool blank = true;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            blank = false;
            break;
        }
    if (blank)
        return default_config();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config: top level must be an object");
    return config_from_json(j);
}

RunConfig load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_text(ss.str());
}

std::string config_to_text(const RunConfig &config) {
    return config_to_json(config).dump(2) + "\n";
}

void apply_override(RunConfig &config, const std::string &dotted_key,
                    const std::string &value) {
    if (dotted_key.empty())
        throw ConfigError("override: empty key");
    std::string pointer = "/";
    for (char ch : dotted_key)
        pointer += (ch == '.') ? '/' : ch;
    json j = config_to_json(config);
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception &) {
        parsed = value; // bare string such as an algorithm name or a path
    }
    try {
        json::json_pointer ptr(pointer);
        if (!j.contains(ptr))
            throw ConfigError("override: unknown key '" + dotted_key + "'");
        j[ptr] = parsed;
    } catch (const json::exception &e) {
        throw ConfigError("override '" + dotted_key + "': " + e.what());
    }
    config = config_from_json(j);
}

std::string config_hash_hex(const RunConfig &config) {
    const std::string dump = config_to_json(config).dump();
    std::uint64_t h = 1469598103934665603ull; // FNV-1a 64
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

} // namespace vaairs
