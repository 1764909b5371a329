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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/environment.hpp"
#include "core/nn.hpp"

namespace vaairs {

enum class Algorithm { Hmca, MasacPlain, Random };

Algorithm algorithm_from_string(const std::string &name); // throws ConfigError
std::string algorithm_name(Algorithm algo);

struct TrainerConfig {
    int episodes = 2000;
    int updates_per_step = 1;
    int batch_size = 256;
    double learning_rate = 3e-4;
    double tau = 0.005;
    double alpha = 0.01; // fixed entropy temperature
    double gamma = 0.95;
    int hidden_width = 256;
    int attention_dim = 64;
    int buffer_capacity = 100000;
    int warmup_transitions = 1000;
    double gravity_noise_std = 1.0;
    double grad_clip = 10.0;

    void validate() const; // throws ConfigError
};

// One multi-agent step; actions are stored in the squashed (-1,1) space the
// policies operate in.
struct Transition {
    Eigen::VectorXd obs;
    Eigen::MatrixXd actions; // n_agents x action_dim
    Eigen::VectorXd rewards; // n_agents
    Eigen::VectorXd next_obs;
};

class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);
    void push(Transition t);
    std::size_t size() const { return data_.size(); }

    struct Batch {
        nn::Mat obs;                  // B x obs_dim
        std::vector<nn::Mat> actions; // per agent, B x act_dim
        nn::Mat rewards;              // B x n_agents
        nn::Mat next_obs;             // B x obs_dim
    };
    Batch sample(std::size_t batch_size, RngStream &rng) const;

  private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> data_;
};

// Mapping between the policies' squashed action space and physical commands.
UavAction physical_action(const Eigen::RowVectorXd &squashed, double v_max,
                          double climb_max);

struct EpisodeRow {
    int episode = 0;
    std::vector<double> agent_rewards; // per-slot means
    double secrecy_mbps = 0.0;         // per-slot mean, raw (can be < 0)
    double max_sidelobe = 0.0;         // per-slot mean
    double energy_kj = 0.0;            // episode total
    int violations = 0;                // agent-slot constraint violations

    double mean_reward() const;
};

struct TrainLog {
    std::vector<EpisodeRow> rows;
};

struct EvalSummary {
    int episodes = 0;
    double reward_mean = 0.0, reward_stderr = 0.0;
    double secrecy_mbps_mean = 0.0, secrecy_mbps_stderr = 0.0;
    double max_sidelobe_mean = 0.0, max_sidelobe_stderr = 0.0;
    double energy_kj_mean = 0.0, energy_kj_stderr = 0.0;
    double violations_mean = 0.0, violations_stderr = 0.0;
};

struct UpdateStats {
    std::vector<double> critic_loss; // per agent
    std::vector<double> actor_loss;
};

// Soft-actor-critic multi-agent trainer. Every agent owns an actor and a
// critic; attention-variant critics share one set of query/key/value
// projections. Training interleaves environment slots with gradient rounds
// and soft target updates; the surface phases never pass through learning
// (the environment sets them in closed form each slot).
class MasacTrainer {
  public:
    MasacTrainer(const ScenarioParams &scenario, const TrainerConfig &config,
                 Algorithm algo, std::uint64_t seed);
    MasacTrainer(const MasacTrainer &) = delete;
    MasacTrainer &operator=(const MasacTrainer &) = delete;

    // Runs config.episodes episodes on env. Writes one metric row per
    // episode to `metrics` (with header) when given.
    TrainLog train(Environment &env, std::ostream *metrics);

    // Deterministic rollouts with mean actions (uniform actions for the
    // random baseline). Writes (episode, t, uav, x, y, z) rows when given.
    EvalSummary evaluate(Environment &env, int episodes,
                         std::ostream *trajectories);

    void save_checkpoint(const std::string &path);
    void load_checkpoint(const std::string &path);

    Algorithm algorithm() const { return algo_; }
    const TrainerConfig &config() const { return config_; }
    double energy_optimal_speed_hint() const { return v_me_; }

    // Exploration blend used while training: pulls the commanded speed
    // toward a draw around the energy-optimal speed early on, fading out
    // linearly over the episode schedule.
    double gravity_speed(double policy_speed, int episode, RngStream &rng) const;

    // Exposed for white-box tests. soft_targets draws one joint next-action
    // sample (target actors in agent order) and returns every agent's
    // regression target y = r + gamma * (Q_target - alpha * logp_target).
    std::vector<nn::Mat> soft_targets(const ReplayBuffer::Batch &batch,
                                      RngStream &rng);
    UpdateStats update_round(const ReplayBuffer::Batch &batch, RngStream &rng);
    std::vector<nn::GaussianPolicy> &actors() { return actors_; }
    std::vector<nn::GaussianPolicy> &target_actors() { return target_actors_; }
    std::vector<nn::AttentionCritic> &critics() { return critics_; }
    std::vector<nn::AttentionCritic> &target_critics() {
        return target_critics_;
    }
    nn::SharedAttention *shared_attention() {
        return algo_ == Algorithm::Hmca ? &shared_ : nullptr;
    }
    nn::SharedAttention *target_shared_attention() {
        return algo_ == Algorithm::Hmca ? &target_shared_ : nullptr;
    }
    std::vector<nn::TensorRef> all_tensors();

  private:
    void build_networks();
    EpisodeRow run_episode(Environment &env, int episode, ReplayBuffer &buffer,
                           RngStream episode_rng, bool learn);

    Algorithm algo_;
    TrainerConfig config_;
    int n_agents_;
    int obs_dim_;
    double v_max_;
    double climb_max_;
    double v_me_; // energy-optimal speed of the propulsion model

    std::vector<nn::GaussianPolicy> actors_, target_actors_;
    std::vector<nn::AttentionCritic> critics_, target_critics_;
    nn::SharedAttention shared_, target_shared_;

    std::vector<nn::Adam> actor_opt_;
    std::vector<nn::Adam> critic_opt_;
    // Per-agent tensor groups. The critic optimizer group additionally
    // contains the shared projections so the gradient clip and step cover
    // both; the polyak groups keep them separate because the shared target
    // moves once per round, not once per agent.
    std::vector<std::vector<nn::TensorRef>> actor_params_, tgt_actor_params_;
    std::vector<std::vector<nn::TensorRef>> critic_own_, tgt_critic_own_;
    std::vector<std::vector<nn::TensorRef>> critic_opt_params_;
    std::vector<nn::TensorRef> shared_params_, tgt_shared_params_;

    RngStream master_;
    RngStream update_rng_;
};

} // namespace vaairs
