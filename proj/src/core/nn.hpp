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

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace vaairs::nn {

// Batch-rows convention throughout: activations are (batch x features),
// layers compute y = x*W + b. Layers hold parameters and accumulated
// gradients but no activation caches; callers keep the forward inputs and
// hand them back to backward(), which makes sharing one layer across several
// forward passes (the attention projections) safe.
using Mat = Eigen::MatrixXd;

struct TensorRef {
    std::string name;
    Mat *value;
    Mat *grad; // may be nullptr for frozen/target tensors
};

enum class Act { None, Relu, Tanh };

Mat activate(Act act, const Mat &pre);
// dpre from dpost given the post-activation values.
Mat activate_backward(Act act, const Mat &post, const Mat &dpost);

struct Linear {
    Mat w; // in x out
    Mat b; // 1 x out
    bool has_bias = true;
    Mat gw, gb;

    Linear() = default;
    Linear(int in, int out, bool bias, RngStream &rng);

    Mat forward(const Mat &x) const;
    // Accumulates parameter gradients, returns dL/dx. `x` must be the input
    // that produced `dy`'s forward pass.
    Mat backward(const Mat &x, const Mat &dy);
    void zero_grad();
    void collect(const std::string &prefix, std::vector<TensorRef> &out);
};

struct MlpCache {
    std::vector<Mat> acts; // acts[0] = input, acts[i+1] = layer i output
};

struct Mlp {
    std::vector<Linear> layers;
    Act hidden = Act::Relu;
    Act output = Act::None;

    Mlp() = default;
    Mlp(const std::vector<int> &dims, Act hidden_act, Act output_act,
        RngStream &rng);

    Mat forward(const Mat &x, MlpCache &cache) const;
    Mat forward(const Mat &x) const; // no cache kept
    Mat backward(const MlpCache &cache, const Mat &dy);
    void zero_grad();
    void collect(const std::string &prefix, std::vector<TensorRef> &out);
    int in_dim() const { return static_cast<int>(layers.front().w.rows()); }
    int out_dim() const { return static_cast<int>(layers.back().w.cols()); }
};

// Adam with a global gradient-norm clip across the parameter group.
struct Adam {
    double lr = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double clip_norm = 10.0;

    void init(const std::vector<TensorRef> &params);
    void step(const std::vector<TensorRef> &params);

  private:
    std::vector<Mat> m_, v_;
    long long t_ = 0;
};

// In-place soft update: target <- (1 - tau) * target + tau * online.
void polyak_update(const std::vector<TensorRef> &target,
                   const std::vector<TensorRef> &online, double tau);
// Hard copy online -> target.
void copy_tensors(const std::vector<TensorRef> &target,
                  const std::vector<TensorRef> &online);

void save_tensors(const std::string &path,
                  const std::vector<TensorRef> &tensors);
void load_tensors(const std::string &path,
                  const std::vector<TensorRef> &tensors);

// Tanh-squashed diagonal Gaussian policy. The trunk is two ReLU hidden
// layers; mean and log-std heads are linear. Log-std is clamped to
// [-20, 2] with zero gradient outside, and the squash correction uses
// log(1 - tanh^2 u) = 2*(log 2 - u - softplus(-2u)) for stability.
struct PolicySample {
    MlpCache trunk_cache;
    Mat trunk_out;
    Mat mean;
    Mat logstd_raw;
    Mat logstd;
    Mat stddev;
    Mat eps;
    Mat pre_tanh;
    Mat action;  // B x act_dim, in (-1, 1)
    Mat logprob; // B x 1
};

class GaussianPolicy {
  public:
    GaussianPolicy() = default;
    GaussianPolicy(int obs_dim, int act_dim, int hidden, RngStream &rng);

    PolicySample sample(const Mat &obs, RngStream &rng) const;
    PolicySample sample_with_noise(const Mat &obs, const Mat &eps) const;
    Mat mean_action(const Mat &obs) const;

    // d_action: dL/da (B x act_dim); d_logprob: dL/dlogp (B x 1).
    void backward(const PolicySample &s, const Mat &d_action,
                  const Mat &d_logprob);
    void zero_grad();
    void collect(const std::string &prefix, std::vector<TensorRef> &out);
    int act_dim() const { return static_cast<int>(mean_head.w.cols()); }

    Mlp trunk;
    Linear mean_head;
    Linear logstd_head;
};

// Query/key/value projections shared by every agent's critic; queries come
// from the agent embedding, keys and values from other agents' actions.
// All three are bias-free.
struct SharedAttention {
    Linear wq, wk, wv;

    SharedAttention() = default;
    SharedAttention(int embed_dim, int act_dim, int attn_dim, RngStream &rng);
    void zero_grad();
    void collect(const std::string &prefix, std::vector<TensorRef> &out);
    int attn_dim() const { return static_cast<int>(wq.w.cols()); }
};

enum class CriticKind { Attention, Concat };

struct CriticCache {
    Mat obs_act;
    MlpCache embed_cache;
    Mat e;
    Mat q;
    std::vector<Mat> other_actions; // inputs of the key/value projections
    std::vector<Mat> keys, values;
    Mat scores;
    Mat attended;
    Mat head_in;
    MlpCache head_cache;
    Mat q_value;
};

// Per-agent action-value network. `Attention` pools the other agents'
// actions with scaled dot-product attention against the shared projections;
// `Concat` is the ablated variant that feeds the raw concatenation of the
// other agents' actions to the value head instead.
class AttentionCritic {
  public:
    AttentionCritic() = default;
    AttentionCritic(int obs_dim, int act_dim, int n_agents, int agent_index,
                    int hidden, int attn_dim, CriticKind kind, RngStream &rng);

    Mat forward(const Mat &obs, const std::vector<Mat> &actions,
                SharedAttention *att, CriticCache &cache) const;
    // Returns dL/d(own action); accumulates gradients into this critic and,
    // for the attention variant, into *att.
    Mat backward(const CriticCache &cache, const Mat &dq,
                 SharedAttention *att);
    void zero_grad();
    void collect(const std::string &prefix, std::vector<TensorRef> &out);

    Mlp embed; // [obs, own action] -> embed_dim, one hidden layer
    Mlp head;  // [embed, pooled] -> 1, two hidden layers
    CriticKind kind = CriticKind::Attention;
    int agent_index = 0;
    int n_agents = 1;
    int action_dim = 0;
};

} // namespace vaairs::nn
