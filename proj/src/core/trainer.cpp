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

#include "core/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "core/errors.hpp"

namespace vaairs {

namespace {

// Fixed-format float for byte-identical logs across reruns.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void mean_stderr(const std::vector<double> &xs, double &mean, double &se) {
    const double n = static_cast<double>(xs.size());
    mean = 0.0;
    se = 0.0;
    if (xs.empty())
        return;
    for (double x : xs)
        mean += x;
    mean /= n;
    if (xs.size() < 2)
        return;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

} // namespace

Algorithm algorithm_from_string(const std::string &name) {
    if (name == "hmca")
        return Algorithm::Hmca;
    if (name == "masac_plain")
        return Algorithm::MasacPlain;
    if (name == "random")
        return Algorithm::Random;
    throw ConfigError("unknown algorithm '" + name +
                      "' (expected hmca, masac_plain or random)");
}

std::string algorithm_name(Algorithm algo) {
    switch (algo) {
    case Algorithm::Hmca:
        return "hmca";
    case Algorithm::MasacPlain:
        return "masac_plain";
    case Algorithm::Random:
        return "random";
    }
    return "?";
}

void TrainerConfig::validate() const {
    if (episodes < 1)
        throw ConfigError("TrainerConfig: episodes must be >= 1");
    if (updates_per_step < 0)
        throw ConfigError("TrainerConfig: updates_per_step must be >= 0");
    if (batch_size < 1)
        throw ConfigError("TrainerConfig: batch_size must be >= 1");
    if (!(learning_rate > 0.0))
        throw ConfigError("TrainerConfig: learning_rate must be positive");
    if (!(tau > 0.0) || tau > 1.0)
        throw ConfigError("TrainerConfig: tau must be in (0, 1]");
    if (!(alpha >= 0.0))
        throw ConfigError("TrainerConfig: alpha must be >= 0");
    if (!(gamma >= 0.0) || gamma >= 1.0)
        throw ConfigError("TrainerConfig: gamma must be in [0, 1)");
    if (hidden_width < 1 || attention_dim < 1)
        throw ConfigError("TrainerConfig: network widths must be >= 1");
    if (buffer_capacity < 1)
        throw ConfigError("TrainerConfig: buffer_capacity must be >= 1");
    if (warmup_transitions < 0)
        throw ConfigError("TrainerConfig: warmup_transitions must be >= 0");
    if (!(gravity_noise_std >= 0.0))
        throw ConfigError("TrainerConfig: gravity_noise_std must be >= 0");
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0)
        throw ConfigError("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
    } else {
        data_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

ReplayBuffer::Batch ReplayBuffer::sample(std::size_t batch_size,
                                         RngStream &rng) const {
    if (data_.empty())
        throw RuntimeFailure("ReplayBuffer: sample from empty buffer");
    const Transition &probe = data_.front();
    const Eigen::Index obs_dim = probe.obs.size();
    const Eigen::Index n_agents = probe.actions.rows();
    const Eigen::Index act_dim = probe.actions.cols();

    Batch b;
    b.obs.resize(static_cast<Eigen::Index>(batch_size), obs_dim);
    b.next_obs.resize(static_cast<Eigen::Index>(batch_size), obs_dim);
    b.rewards.resize(static_cast<Eigen::Index>(batch_size), n_agents);
    b.actions.assign(static_cast<std::size_t>(n_agents),
                     nn::Mat(static_cast<Eigen::Index>(batch_size), act_dim));
    for (std::size_t i = 0; i < batch_size; ++i) {
        const Transition &t = data_[rng.uniform_index(data_.size())];
        const Eigen::Index row = static_cast<Eigen::Index>(i);
        b.obs.row(row) = t.obs.transpose();
        b.next_obs.row(row) = t.next_obs.transpose();
        b.rewards.row(row) = t.rewards.transpose();
        for (Eigen::Index m = 0; m < n_agents; ++m)
            b.actions[static_cast<std::size_t>(m)].row(row) = t.actions.row(m);
    }
    return b;
}

UavAction physical_action(const Eigen::RowVectorXd &squashed, double v_max,
                          double climb_max) {
    if (squashed.size() != 4)
        throw RuntimeFailure("physical_action: expected 4 action dims");
    UavAction a;
    a.weight = 0.5 * (squashed(0) + 1.0);
    a.speed = 0.5 * (squashed(1) + 1.0) * v_max;
    a.direction = (squashed(2) + 1.0) * kPi;
    a.climb = squashed(3) * climb_max;
    return a;
}

double EpisodeRow::mean_reward() const {
    if (agent_rewards.empty())
        return 0.0;
    double s = 0.0;
    for (double r : agent_rewards)
        s += r;
    return s / static_cast<double>(agent_rewards.size());
}

MasacTrainer::MasacTrainer(const ScenarioParams &scenario,
                           const TrainerConfig &config, Algorithm algo,
                           std::uint64_t seed)
    : algo_(algo), config_(config), n_agents_(scenario.num_uavs),
      obs_dim_(3 * scenario.num_uavs + 4), v_max_(scenario.v_max),
      climb_max_(scenario.climb_max),
      v_me_(energy_optimal_speed(scenario.propulsion, scenario.v_max)),
      master_(seed), update_rng_(master_.child(2)) {
    config_.validate();
    scenario.validate();
    if (algo_ != Algorithm::Random)
        build_networks();
}

void MasacTrainer::build_networks() {
    RngStream init = master_.child(0);
    const int h = config_.hidden_width;
    const int dk = config_.attention_dim;
    const int adim = Environment::kActionDim;
    const nn::CriticKind kind = algo_ == Algorithm::Hmca
                                    ? nn::CriticKind::Attention
                                    : nn::CriticKind::Concat;

    actors_.reserve(n_agents_);
    target_actors_.reserve(n_agents_);
    critics_.reserve(n_agents_);
    target_critics_.reserve(n_agents_);
    for (int m = 0; m < n_agents_; ++m) {
        RngStream r = init.child(static_cast<std::uint64_t>(m));
        actors_.emplace_back(obs_dim_, adim, h, r);
        critics_.emplace_back(obs_dim_, adim, n_agents_, m, h, dk, kind, r);
        RngStream rt = init.child(1000 + static_cast<std::uint64_t>(m));
        target_actors_.emplace_back(obs_dim_, adim, h, rt);
        target_critics_.emplace_back(obs_dim_, adim, n_agents_, m, h, dk, kind,
                                     rt);
    }
    RngStream rs = init.child(5000);
    shared_ = nn::SharedAttention(h, adim, dk, rs);
    target_shared_ = nn::SharedAttention(h, adim, dk, rs);

    actor_params_.resize(n_agents_);
    tgt_actor_params_.resize(n_agents_);
    critic_own_.resize(n_agents_);
    tgt_critic_own_.resize(n_agents_);
    critic_opt_params_.resize(n_agents_);
    shared_params_.clear();
    tgt_shared_params_.clear();
    if (algo_ == Algorithm::Hmca) {
        shared_.collect("shared", shared_params_);
        target_shared_.collect("shared", tgt_shared_params_);
    }
    for (int m = 0; m < n_agents_; ++m) {
        const std::string am = "actor" + std::to_string(m);
        const std::string cm = "critic" + std::to_string(m);
        actors_[m].collect(am, actor_params_[m]);
        target_actors_[m].collect(am, tgt_actor_params_[m]);
        critics_[m].collect(cm, critic_own_[m]);
        target_critics_[m].collect(cm, tgt_critic_own_[m]);
        critic_opt_params_[m] = critic_own_[m];
        critic_opt_params_[m].insert(critic_opt_params_[m].end(),
                                     shared_params_.begin(),
                                     shared_params_.end());
        nn::copy_tensors(tgt_actor_params_[m], actor_params_[m]);
        nn::copy_tensors(tgt_critic_own_[m], critic_own_[m]);
    }
    if (algo_ == Algorithm::Hmca)
        nn::copy_tensors(tgt_shared_params_, shared_params_);

    actor_opt_.resize(n_agents_);
    critic_opt_.resize(n_agents_);
    for (int m = 0; m < n_agents_; ++m) {
        actor_opt_[m].lr = config_.learning_rate;
        actor_opt_[m].clip_norm = config_.grad_clip;
        actor_opt_[m].init(actor_params_[m]);
        critic_opt_[m].lr = config_.learning_rate;
        critic_opt_[m].clip_norm = config_.grad_clip;
        critic_opt_[m].init(critic_opt_params_[m]);
    }
}

double MasacTrainer::gravity_speed(double policy_speed, int episode,
                                   RngStream &rng) const {
    const double zeta = static_cast<double>(episode + 1) /
                        static_cast<double>(config_.episodes);
    const double pull = rng.normal(v_me_, config_.gravity_noise_std);
    const double v = zeta * policy_speed + (1.0 - zeta) * pull;
    return std::clamp(v, 0.0, v_max_);
}

std::vector<nn::Mat> MasacTrainer::soft_targets(const ReplayBuffer::Batch &batch,
                                                RngStream &rng) {
    const Eigen::Index bsz = batch.obs.rows();
    std::vector<nn::Mat> next_actions(static_cast<std::size_t>(n_agents_));
    std::vector<nn::Mat> next_logp(static_cast<std::size_t>(n_agents_));
    for (int m = 0; m < n_agents_; ++m) {
        nn::PolicySample s = target_actors_[m].sample(batch.next_obs, rng);
        next_actions[m] = std::move(s.action);
        next_logp[m] = std::move(s.logprob);
    }
    std::vector<nn::Mat> ys(static_cast<std::size_t>(n_agents_));
    nn::SharedAttention *tsh = target_shared_attention();
    for (int m = 0; m < n_agents_; ++m) {
        nn::CriticCache cache;
        const nn::Mat qbar =
            target_critics_[m].forward(batch.next_obs, next_actions, tsh,
                                       cache);
        ys[m] = batch.rewards.col(m) +
                config_.gamma * (qbar - config_.alpha * next_logp[m]);
        if (ys[m].rows() != bsz)
            throw RuntimeFailure("soft_targets: batch shape broke");
    }
    return ys;
}

UpdateStats MasacTrainer::update_round(const ReplayBuffer::Batch &batch,
                                       RngStream &rng) {
    if (algo_ == Algorithm::Random)
        throw RuntimeFailure("update_round: random baseline has no networks");
    const Eigen::Index bsz = batch.obs.rows();
    const double inv_b = 1.0 / static_cast<double>(bsz);
    nn::SharedAttention *sh = shared_attention();
    UpdateStats stats;
    stats.critic_loss.resize(n_agents_);
    stats.actor_loss.resize(n_agents_);

    const std::vector<nn::Mat> ys = soft_targets(batch, rng);

    for (int m = 0; m < n_agents_; ++m) {
        critics_[m].zero_grad();
        if (sh)
            sh->zero_grad();
        nn::CriticCache cache;
        const nn::Mat q = critics_[m].forward(batch.obs, batch.actions, sh,
                                              cache);
        const nn::Mat diff = q - ys[m];
        stats.critic_loss[m] = 0.5 * diff.squaredNorm() * inv_b;
        (void)critics_[m].backward(cache, diff * inv_b, sh);
        critic_opt_[m].step(critic_opt_params_[m]);
    }

    for (int m = 0; m < n_agents_; ++m) {
        actors_[m].zero_grad();
        nn::PolicySample s = actors_[m].sample(batch.obs, rng);
        std::vector<nn::Mat> acts = batch.actions;
        acts[static_cast<std::size_t>(m)] = s.action;
        critics_[m].zero_grad();
        if (sh)
            sh->zero_grad();
        nn::CriticCache cache;
        const nn::Mat q = critics_[m].forward(batch.obs, acts, sh, cache);
        stats.actor_loss[m] =
            (config_.alpha * s.logprob - q).sum() * inv_b;
        const nn::Mat d_own = critics_[m].backward(
            cache, nn::Mat::Constant(bsz, 1, -inv_b), sh);
        actors_[m].backward(s, d_own,
                            nn::Mat::Constant(bsz, 1, config_.alpha * inv_b));
        actor_opt_[m].step(actor_params_[m]);
        // The critic only served as the objective here; drop its leaked
        // gradients so they cannot contaminate the next critic step.
        critics_[m].zero_grad();
        if (sh)
            sh->zero_grad();
    }

    for (int m = 0; m < n_agents_; ++m) {
        nn::polyak_update(tgt_actor_params_[m], actor_params_[m], config_.tau);
        nn::polyak_update(tgt_critic_own_[m], critic_own_[m], config_.tau);
    }
    if (algo_ == Algorithm::Hmca)
        nn::polyak_update(tgt_shared_params_, shared_params_, config_.tau);
    return stats;
}

EpisodeRow MasacTrainer::run_episode(Environment &env, int episode,
                                     ReplayBuffer &buffer,
                                     RngStream episode_rng, bool learn) {
    RngStream action_rng = episode_rng.child(0);
    RngStream gravity_rng = episode_rng.child(1);
    const int adim = Environment::kActionDim;
    const int horizon = env.scenario().horizon;

    Eigen::VectorXd obs = env.reset();
    EpisodeRow row;
    row.episode = episode;
    row.agent_rewards.assign(static_cast<std::size_t>(n_agents_), 0.0);

    for (int t = 0; t < horizon; ++t) {
        Eigen::MatrixXd acts(n_agents_, adim);
        if (algo_ == Algorithm::Random) {
            for (int m = 0; m < n_agents_; ++m)
                for (int j = 0; j < adim; ++j)
                    acts(m, j) = action_rng.uniform(-1.0, 1.0);
        } else {
            const nn::Mat obs_row = obs.transpose();
            for (int m = 0; m < n_agents_; ++m)
                acts.row(m) =
                    actors_[m].sample(obs_row, action_rng).action.row(0);
        }

        if (learn && algo_ == Algorithm::Hmca) {
            for (int m = 0; m < n_agents_; ++m) {
                const double v = 0.5 * (acts(m, 1) + 1.0) * v_max_;
                const double vg = gravity_speed(v, episode, gravity_rng);
                acts(m, 1) = 2.0 * vg / v_max_ - 1.0;
            }
        }

        std::vector<UavAction> commands(static_cast<std::size_t>(n_agents_));
        for (int m = 0; m < n_agents_; ++m)
            commands[static_cast<std::size_t>(m)] =
                physical_action(acts.row(m), v_max_, climb_max_);

        StepResult res = env.step(commands);

        if (learn && algo_ != Algorithm::Random) {
            Transition tr;
            tr.obs = obs;
            tr.actions = acts;
            tr.rewards = Eigen::Map<const Eigen::VectorXd>(
                res.rewards.data(), static_cast<Eigen::Index>(n_agents_));
            tr.next_obs = res.observation;
            buffer.push(std::move(tr));
        }

        for (int m = 0; m < n_agents_; ++m) {
            row.agent_rewards[static_cast<std::size_t>(m)] += res.rewards[m];
            if (res.boundary_violation[m] != 0 || res.collision_count[m] > 0)
                ++row.violations;
        }
        row.secrecy_mbps += res.metrics.secrecy_rate / 1e6;
        row.max_sidelobe += res.metrics.max_sidelobe;
        row.energy_kj += res.total_energy / 1000.0;
        obs = res.observation;

        if (learn && algo_ != Algorithm::Random &&
            buffer.size() >=
                static_cast<std::size_t>(config_.warmup_transitions) &&
            buffer.size() >= static_cast<std::size_t>(config_.batch_size)) {
            for (int u = 0; u < config_.updates_per_step; ++u) {
                ReplayBuffer::Batch b = buffer.sample(
                    static_cast<std::size_t>(config_.batch_size), update_rng_);
                update_round(b, update_rng_);
            }
        }
    }

    const double inv_t = 1.0 / static_cast<double>(horizon);
    for (double &r : row.agent_rewards)
        r *= inv_t;
    row.secrecy_mbps *= inv_t;
    row.max_sidelobe *= inv_t;
    return row;
}

TrainLog MasacTrainer::train(Environment &env, std::ostream *metrics) {
    if (env.num_agents() != n_agents_ || env.obs_dim() != obs_dim_)
        throw RuntimeFailure("train: environment does not match the trainer");
    ReplayBuffer buffer(static_cast<std::size_t>(config_.buffer_capacity));
    RngStream episodes_rng = master_.child(1);

    if (metrics) {
        *metrics << "episode";
        for (int m = 0; m < n_agents_; ++m)
            *metrics << ",reward_a" << m;
        *metrics << ",secrecy_mbps,max_sll,energy_kj,violations\n";
    }

    TrainLog log;
    log.rows.reserve(static_cast<std::size_t>(config_.episodes));
    for (int ep = 0; ep < config_.episodes; ++ep) {
        EpisodeRow row = run_episode(
            env, ep, buffer,
            episodes_rng.child(static_cast<std::uint64_t>(ep)), true);
        if (metrics) {
            *metrics << row.episode;
            for (double r : row.agent_rewards)
                *metrics << ',' << fmt(r);
            *metrics << ',' << fmt(row.secrecy_mbps) << ','
                     << fmt(row.max_sidelobe) << ',' << fmt(row.energy_kj)
                     << ',' << row.violations << '\n';
        }
        log.rows.push_back(std::move(row));
    }
    return log;
}

EvalSummary MasacTrainer::evaluate(Environment &env, int episodes,
                                   std::ostream *trajectories) {
    if (episodes < 1)
        throw ConfigError("evaluate: episodes must be >= 1");
    if (env.num_agents() != n_agents_ || env.obs_dim() != obs_dim_)
        throw RuntimeFailure("evaluate: environment does not match the trainer");
    RngStream eval_rng = master_.child(3);

    if (trajectories)
        *trajectories << "episode,t,uav,x,y,z\n";

    std::vector<double> rewards, secrecy, sll, energy, violations;
    for (int ep = 0; ep < episodes; ++ep) {
        RngStream ep_rng = eval_rng.child(static_cast<std::uint64_t>(ep));
        RngStream action_rng = ep_rng.child(0);
        Eigen::VectorXd obs = env.reset();
        const int horizon = env.scenario().horizon;
        EpisodeRow row;
        row.agent_rewards.assign(static_cast<std::size_t>(n_agents_), 0.0);

        const auto dump_positions = [&](int t) {
            if (!trajectories)
                return;
            for (int m = 0; m < n_agents_; ++m) {
                const Vec3 &p =
                    env.uav_states()[static_cast<std::size_t>(m)].position;
                *trajectories << ep << ',' << t << ',' << m << ',' << fmt(p.x)
                              << ',' << fmt(p.y) << ',' << fmt(p.z) << '\n';
            }
        };
        dump_positions(0);

        for (int t = 0; t < horizon; ++t) {
            Eigen::MatrixXd acts(n_agents_, Environment::kActionDim);
            if (algo_ == Algorithm::Random) {
                for (int m = 0; m < n_agents_; ++m)
                    for (int j = 0; j < Environment::kActionDim; ++j)
                        acts(m, j) = action_rng.uniform(-1.0, 1.0);
            } else {
                const nn::Mat obs_row = obs.transpose();
                for (int m = 0; m < n_agents_; ++m)
                    acts.row(m) = actors_[m].mean_action(obs_row).row(0);
            }
            std::vector<UavAction> commands(
                static_cast<std::size_t>(n_agents_));
            for (int m = 0; m < n_agents_; ++m)
                commands[static_cast<std::size_t>(m)] =
                    physical_action(acts.row(m), v_max_, climb_max_);
            StepResult res = env.step(commands);
            for (int m = 0; m < n_agents_; ++m) {
                row.agent_rewards[static_cast<std::size_t>(m)] +=
                    res.rewards[m];
                if (res.boundary_violation[m] != 0 ||
                    res.collision_count[m] > 0)
                    ++row.violations;
            }
            row.secrecy_mbps += res.metrics.secrecy_rate / 1e6;
            row.max_sidelobe += res.metrics.max_sidelobe;
            row.energy_kj += res.total_energy / 1000.0;
            obs = res.observation;
            dump_positions(t + 1);
        }
        const double inv_t = 1.0 / static_cast<double>(horizon);
        for (double &r : row.agent_rewards)
            r *= inv_t;
        rewards.push_back(row.mean_reward());
        secrecy.push_back(row.secrecy_mbps * inv_t);
        sll.push_back(row.max_sidelobe * inv_t);
        energy.push_back(row.energy_kj);
        violations.push_back(static_cast<double>(row.violations));
    }

    EvalSummary s;
    s.episodes = episodes;
    mean_stderr(rewards, s.reward_mean, s.reward_stderr);
    mean_stderr(secrecy, s.secrecy_mbps_mean, s.secrecy_mbps_stderr);
    mean_stderr(sll, s.max_sidelobe_mean, s.max_sidelobe_stderr);
    mean_stderr(energy, s.energy_kj_mean, s.energy_kj_stderr);
    mean_stderr(violations, s.violations_mean, s.violations_stderr);
    return s;
}

std::vector<nn::TensorRef> MasacTrainer::all_tensors() {
    std::vector<nn::TensorRef> all;
    for (int m = 0; m < n_agents_; ++m) {
        for (const auto &t : actor_params_[m])
            all.push_back(t);
        for (const auto &t : critic_own_[m])
            all.push_back(t);
    }
    for (const auto &t : shared_params_)
        all.push_back(t);
    for (int m = 0; m < n_agents_; ++m) {
        for (const auto &t : tgt_actor_params_[m])
            all.push_back({"target." + t.name, t.value, t.grad});
        for (const auto &t : tgt_critic_own_[m])
            all.push_back({"target." + t.name, t.value, t.grad});
    }
    for (const auto &t : tgt_shared_params_)
        all.push_back({"target." + t.name, t.value, t.grad});
    return all;
}

void MasacTrainer::save_checkpoint(const std::string &path) {
    if (algo_ == Algorithm::Random)
        throw RuntimeFailure("save_checkpoint: random baseline has no "
                             "parameters");
    nn::save_tensors(path, all_tensors());
}

void MasacTrainer::load_checkpoint(const std::string &path) {
    if (algo_ == Algorithm::Random)
        throw RuntimeFailure("load_checkpoint: random baseline has no "
                             "parameters");
    nn::load_tensors(path, all_tensors());
}

} // namespace vaairs
