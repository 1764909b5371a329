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

#include "core/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "core/errors.hpp"

namespace vaairs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw RuntimeFailure("cannot write " + path.string());
    out << content;
    if (!out)
        throw RuntimeFailure("write failed for " + path.string());
}

double tail_mean(const std::vector<double> &xs, std::size_t window) {
    if (xs.empty())
        return 0.0;
    const std::size_t n = std::min(window, xs.size());
    double s = 0.0;
    for (std::size_t i = xs.size() - n; i < xs.size(); ++i)
        s += xs[i];
    return s / static_cast<double>(n);
}

struct LogColumns {
    std::vector<double> reward, secrecy, sidelobe, energy, violations;
};

LogColumns columns_from_log(const TrainLog &log) {
    LogColumns c;
    for (const EpisodeRow &row : log.rows) {
        c.reward.push_back(row.mean_reward());
        c.secrecy.push_back(row.secrecy_mbps);
        c.sidelobe.push_back(row.max_sidelobe);
        c.energy.push_back(row.energy_kj);
        c.violations.push_back(static_cast<double>(row.violations));
    }
    return c;
}

// Minimal CSV reader for the metric logs this project writes (no quoting).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const fs::path &path) {
    std::ifstream in(path);
    if (!in)
        throw RuntimeFailure("cannot read " + path.string());
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    if (first)
        throw RuntimeFailure("empty metrics file: " + path.string());
    return t;
}

std::size_t column_index(const CsvTable &t, const std::string &name) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name)
            return i;
    throw RuntimeFailure("metrics file lacks column '" + name + "'");
}

json manifest_base(const RunConfig &config, RunMode mode) {
    json m;
    m["tool"] = "vaairs";
    m["code_version"] = kCodeVersion;
    m["mode"] = run_mode_name(mode);
    m["algorithm"] = config.exec.algorithm;
    m["seed"] = config.exec.seed;
    m["config_hash"] = config_hash_hex(config);
    m["n_agents"] = config.scenario.num_uavs;
    return m;
}

void finish_manifest(json m, const fs::path &dir, RunOutcome &outcome) {
    m["files"] = outcome.files;
    write_file(dir / "manifest.json", m.dump(2) + "\n");
    outcome.files.push_back("manifest.json");
}

RunOutcome run_train(const RunConfig &config) {
    RunOutcome outcome;
    outcome.mode = RunMode::Train;
    outcome.out_dir = config.exec.out_dir;
    const fs::path dir(config.exec.out_dir);
    fs::create_directories(dir);

    write_file(dir / "config.json", config_to_text(config));
    outcome.files.push_back("config.json");

    RngStream root(config.exec.seed);
    Environment env(config.scenario, config.reward, root.child(1).seed());
    MasacTrainer trainer(config.scenario, config.trainer,
                         algorithm_from_string(config.exec.algorithm),
                         root.child(2).seed());
    if (!config.exec.checkpoint.empty())
        trainer.load_checkpoint(config.exec.checkpoint);

    std::ostringstream metrics;
    TrainLog log = trainer.train(env, &metrics);
    write_file(dir / "metrics.csv", metrics.str());
    outcome.files.push_back("metrics.csv");

    if (trainer.algorithm() != Algorithm::Random) {
        trainer.save_checkpoint((dir / "checkpoint.bin").string());
        outcome.files.push_back("checkpoint.bin");
    }

    const LogColumns cols = columns_from_log(log);
    outcome.final50_reward = tail_mean(cols.reward, 50);
    outcome.final50_secrecy_mbps = tail_mean(cols.secrecy, 50);
    outcome.final50_sidelobe = tail_mean(cols.sidelobe, 50);
    outcome.final50_energy_kj = tail_mean(cols.energy, 50);

    json m = manifest_base(config, RunMode::Train);
    m["episodes"] = config.trainer.episodes;
    m["final50_mean_reward"] = outcome.final50_reward;
    m["final50_secrecy_mbps"] = outcome.final50_secrecy_mbps;
    m["final50_energy_kj"] = outcome.final50_energy_kj;
    finish_manifest(std::move(m), dir, outcome);
    return outcome;
}

RunOutcome run_eval(const RunConfig &config) {
    RunOutcome outcome;
    outcome.mode = RunMode::Eval;
    outcome.out_dir = config.exec.out_dir;
    const fs::path dir(config.exec.out_dir);
    fs::create_directories(dir);

    write_file(dir / "config.json", config_to_text(config));
    outcome.files.push_back("config.json");

    RngStream root(config.exec.seed);
    Environment env(config.scenario, config.reward, root.child(1).seed());
    MasacTrainer trainer(config.scenario, config.trainer,
                         algorithm_from_string(config.exec.algorithm),
                         root.child(2).seed());
    if (!config.exec.checkpoint.empty())
        trainer.load_checkpoint(config.exec.checkpoint);

    std::ostringstream traj;
    outcome.eval = trainer.evaluate(env, config.exec.eval_episodes, &traj);
    write_file(dir / "trajectories.csv", traj.str());
    outcome.files.push_back("trajectories.csv");

    std::ostringstream sum;
    sum << "metric,mean,stderr\n";
    sum << "reward," << fmt(outcome.eval.reward_mean) << ','
        << fmt(outcome.eval.reward_stderr) << '\n';
    sum << "secrecy_mbps," << fmt(outcome.eval.secrecy_mbps_mean) << ','
        << fmt(outcome.eval.secrecy_mbps_stderr) << '\n';
    sum << "max_sll," << fmt(outcome.eval.max_sidelobe_mean) << ','
        << fmt(outcome.eval.max_sidelobe_stderr) << '\n';
    sum << "energy_kj," << fmt(outcome.eval.energy_kj_mean) << ','
        << fmt(outcome.eval.energy_kj_stderr) << '\n';
    sum << "violations," << fmt(outcome.eval.violations_mean) << ','
        << fmt(outcome.eval.violations_stderr) << '\n';
    write_file(dir / "eval_summary.csv", sum.str());
    outcome.files.push_back("eval_summary.csv");

    json m = manifest_base(config, RunMode::Eval);
    m["eval_episodes"] = config.exec.eval_episodes;
    m["reward_mean"] = outcome.eval.reward_mean;
    m["secrecy_mbps_mean"] = outcome.eval.secrecy_mbps_mean;
    finish_manifest(std::move(m), dir, outcome);
    return outcome;
}

RunOutcome run_sweep(const RunConfig &config) {
    if (config.sweep.key.empty() || config.sweep.values.empty())
        throw ConfigError("sweep mode needs sweep.key and sweep.values");
    RunOutcome outcome;
    outcome.mode = RunMode::Sweep;
    outcome.out_dir = config.exec.out_dir;
    const fs::path dir(config.exec.out_dir);
    fs::create_directories(dir);

    write_file(dir / "config.json", config_to_text(config));
    outcome.files.push_back("config.json");

    for (std::size_t i = 0; i < config.sweep.values.size(); ++i) {
        const double value = config.sweep.values[i];
        RunConfig child = config;
        child.sweep = SweepSpec{};
        apply_override(child, config.sweep.key, fmt(value));
        const fs::path child_dir = dir / ("child_" + std::to_string(i));
        child.exec.out_dir = child_dir.string();
        const RunOutcome child_out = run_train(child);

        SweepChildSummary s;
        s.value = value;
        s.dir = child_dir.string();
        s.reward50 = child_out.final50_reward;
        s.secrecy50 = child_out.final50_secrecy_mbps;
        s.sidelobe50 = child_out.final50_sidelobe;
        s.energy50 = child_out.final50_energy_kj;
        outcome.children.push_back(std::move(s));
    }

    std::ostringstream sum;
    sum << config.sweep.key
        << ",reward_final50,secrecy_mbps_final50,max_sll_final50,"
           "energy_kj_final50\n";
    for (const SweepChildSummary &s : outcome.children)
        sum << fmt(s.value) << ',' << fmt(s.reward50) << ',' << fmt(s.secrecy50)
            << ',' << fmt(s.sidelobe50) << ',' << fmt(s.energy50) << '\n';
    write_file(dir / "sweep_summary.csv", sum.str());
    outcome.files.push_back("sweep_summary.csv");

    outcome.secrecy_nondecreasing = true;
    for (std::size_t i = 1; i < outcome.children.size(); ++i)
        if (outcome.children[i].secrecy50 <
            outcome.children[i - 1].secrecy50)
            outcome.secrecy_nondecreasing = false;
    if (!outcome.children.empty() &&
        outcome.children.front().energy50 != 0.0)
        outcome.energy_growth_ratio =
            outcome.children.back().energy50 / outcome.children.front().energy50;

    json m = manifest_base(config, RunMode::Sweep);
    m["sweep_key"] = config.sweep.key;
    m["sweep_values"] = config.sweep.values;
    json kids = json::array();
    for (const SweepChildSummary &s : outcome.children)
        kids.push_back(fs::path(s.dir).filename().string());
    m["children"] = kids;
    m["secrecy_nondecreasing"] = outcome.secrecy_nondecreasing;
    m["energy_growth_ratio"] = outcome.energy_growth_ratio;
    finish_manifest(std::move(m), dir, outcome);
    return outcome;
}

RunOutcome run_export(const RunConfig &config) {
    RunOutcome outcome;
    outcome.mode = RunMode::Export;
    outcome.out_dir = config.exec.out_dir;
    for (const std::string &f : export_plot_data(config.exec.out_dir))
        outcome.files.push_back(f);
    return outcome;
}

} // namespace

RunMode run_mode_from_string(const std::string &name) {
    if (name == "train")
        return RunMode::Train;
    if (name == "eval")
        return RunMode::Eval;
    if (name == "sweep")
        return RunMode::Sweep;
    if (name == "export")
        return RunMode::Export;
    throw ConfigError("unknown mode '" + name +
                      "' (expected train, eval, sweep or export)");
}

std::string run_mode_name(RunMode mode) {
    switch (mode) {
    case RunMode::Train:
        return "train";
    case RunMode::Eval:
        return "eval";
    case RunMode::Sweep:
        return "sweep";
    case RunMode::Export:
        return "export";
    }
    return "?";
}

std::vector<double> trailing_mean(const std::vector<double> &xs, int window) {
    if (window < 1)
        throw DomainError("trailing_mean: window must be >= 1");
    std::vector<double> out(xs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        acc += xs[i];
        if (i >= static_cast<std::size_t>(window))
            acc -= xs[i - static_cast<std::size_t>(window)];
        const double n = static_cast<double>(
            std::min<std::size_t>(static_cast<std::size_t>(window), i + 1));
        out[i] = acc / n;
    }
    return out;
}

std::vector<std::string> export_plot_data(const std::string &run_dir) {
    const fs::path dir(run_dir);
    const fs::path metrics = dir / "metrics.csv";
    if (!fs::exists(metrics))
        throw RuntimeFailure("export: no metrics.csv under " + run_dir);
    const CsvTable t = read_csv(metrics);

    const std::size_t ep_col = column_index(t, "episode");
    const std::size_t secrecy_col = column_index(t, "secrecy_mbps");
    const std::size_t sll_col = column_index(t, "max_sll");
    const std::size_t energy_col = column_index(t, "energy_kj");
    std::vector<std::size_t> reward_cols;
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i].rfind("reward_a", 0) == 0)
            reward_cols.push_back(i);
    if (reward_cols.empty())
        throw RuntimeFailure("export: no reward columns in metrics.csv");

    std::vector<double> episode, reward, secrecy, sll, energy;
    for (const auto &row : t.rows) {
        episode.push_back(std::stod(row.at(ep_col)));
        double r = 0.0;
        for (std::size_t c : reward_cols)
            r += std::stod(row.at(c));
        reward.push_back(r / static_cast<double>(reward_cols.size()));
        secrecy.push_back(std::stod(row.at(secrecy_col)));
        sll.push_back(std::stod(row.at(sll_col)));
        energy.push_back(std::stod(row.at(energy_col)));
    }

    constexpr int kWindow = 20;
    const std::vector<double> reward_s = trailing_mean(reward, kWindow);
    const std::vector<double> secrecy_s = trailing_mean(secrecy, kWindow);
    const std::vector<double> sll_s = trailing_mean(sll, kWindow);
    const std::vector<double> energy_s = trailing_mean(energy, kWindow);

    const fs::path plots = dir / "plots";
    fs::create_directories(plots);

    std::ostringstream conv;
    conv << "episode,reward,reward_smooth,secrecy_mbps,secrecy_smooth,"
            "max_sll,sll_smooth,energy_kj,energy_smooth\n";
    for (std::size_t i = 0; i < episode.size(); ++i)
        conv << fmt(episode[i]) << ',' << fmt(reward[i]) << ','
             << fmt(reward_s[i]) << ',' << fmt(secrecy[i]) << ','
             << fmt(secrecy_s[i]) << ',' << fmt(sll[i]) << ',' << fmt(sll_s[i])
             << ',' << fmt(energy[i]) << ',' << fmt(energy_s[i]) << '\n';
    write_file(plots / "convergence.csv", conv.str());

    const auto mean_of = [](const std::vector<double> &xs) {
        double s = 0.0;
        for (double x : xs)
            s += x;
        return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
    };
    std::ostringstream sum;
    sum << "metric,mean,final50_mean\n";
    sum << "reward," << fmt(mean_of(reward)) << ',' << fmt(tail_mean(reward, 50))
        << '\n';
    sum << "secrecy_mbps," << fmt(mean_of(secrecy)) << ','
        << fmt(tail_mean(secrecy, 50)) << '\n';
    sum << "max_sll," << fmt(mean_of(sll)) << ',' << fmt(tail_mean(sll, 50))
        << '\n';
    sum << "energy_kj," << fmt(mean_of(energy)) << ','
        << fmt(tail_mean(energy, 50)) << '\n';
    write_file(plots / "summary.csv", sum.str());

    return {"plots/convergence.csv", "plots/summary.csv"};
}

RunOutcome run(const RunConfig &config, RunMode mode) {
    config.validate();
    switch (mode) {
    case RunMode::Train:
        return run_train(config);
    case RunMode::Eval:
        return run_eval(config);
    case RunMode::Sweep:
        return run_sweep(config);
    case RunMode::Export:
        return run_export(config);
    }
    throw RuntimeFailure("run: unreachable mode");
}

} // namespace vaairs
