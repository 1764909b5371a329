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

#include "core/nn.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "core/errors.hpp"

namespace vaairs::nn {

namespace {

constexpr double kLogStdMin = -20.0;
constexpr double kLogStdMax = 2.0;
constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kLog2 = 0.6931471805599453;

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

} // namespace

Mat activate(Act act, const Mat &pre) {
    switch (act) {
    case Act::None:
        return pre;
    case Act::Relu:
        return pre.cwiseMax(0.0);
    case Act::Tanh:
        return pre.array().tanh().matrix();
    }
    return pre;
}

Mat activate_backward(Act act, const Mat &post, const Mat &dpost) {
    switch (act) {
    case Act::None:
        return dpost;
    case Act::Relu:
        return ((post.array() > 0.0).cast<double>() * dpost.array()).matrix();
    case Act::Tanh:
        return ((1.0 - post.array().square()) * dpost.array()).matrix();
    }
    return dpost;
}

Linear::Linear(int in, int out, bool bias, RngStream &rng) : has_bias(bias) {
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    w.resize(in, out);
    for (int i = 0; i < in; ++i)
        for (int j = 0; j < out; ++j)
            w(i, j) = rng.uniform(-limit, limit);
    b = Mat::Zero(1, out);
    gw = Mat::Zero(in, out);
    gb = Mat::Zero(1, out);
}

Mat Linear::forward(const Mat &x) const {
    Mat y = x * w;
    if (has_bias)
        y.rowwise() += b.row(0);
    return y;
}

Mat Linear::backward(const Mat &x, const Mat &dy) {
    gw.noalias() += x.transpose() * dy;
    if (has_bias)
        gb.row(0) += dy.colwise().sum();
    return dy * w.transpose();
}

void Linear::zero_grad() {
    gw.setZero();
    gb.setZero();
}

void Linear::collect(const std::string &prefix, std::vector<TensorRef> &out) {
    out.push_back({prefix + ".w", &w, &gw});
    if (has_bias)
        out.push_back({prefix + ".b", &b, &gb});
}

Mlp::Mlp(const std::vector<int> &dims, Act hidden_act, Act output_act,
         RngStream &rng)
    : hidden(hidden_act), output(output_act) {
    if (dims.size() < 2)
        throw ConfigError("Mlp: need at least input and output dims");
    for (std::size_t i = 0; i + 1 < dims.size(); ++i)
        layers.emplace_back(dims[i], dims[i + 1], true, rng);
}

Mat Mlp::forward(const Mat &x, MlpCache &cache) const {
    cache.acts.clear();
    cache.acts.reserve(layers.size() + 1);
    cache.acts.push_back(x);
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const Act act = (i + 1 == layers.size()) ? output : hidden;
        cache.acts.push_back(activate(act, layers[i].forward(cache.acts[i])));
    }
    return cache.acts.back();
}

Mat Mlp::forward(const Mat &x) const {
    MlpCache cache;
    return forward(x, cache);
}

Mat Mlp::backward(const MlpCache &cache, const Mat &dy) {
    Mat d = dy;
    for (std::size_t i = layers.size(); i-- > 0;) {
        const Act act = (i + 1 == layers.size()) ? output : hidden;
        d = activate_backward(act, cache.acts[i + 1], d);
        d = layers[i].backward(cache.acts[i], d);
    }
    return d;
}

void Mlp::zero_grad() {
    for (Linear &l : layers)
        l.zero_grad();
}

void Mlp::collect(const std::string &prefix, std::vector<TensorRef> &out) {
    for (std::size_t i = 0; i < layers.size(); ++i)
        layers[i].collect(prefix + ".l" + std::to_string(i), out);
}

void Adam::init(const std::vector<TensorRef> &params) {
    m_.clear();
    v_.clear();
    t_ = 0;
    for (const TensorRef &p : params) {
        m_.push_back(Mat::Zero(p.value->rows(), p.value->cols()));
        v_.push_back(Mat::Zero(p.value->rows(), p.value->cols()));
    }
}

void Adam::step(const std::vector<TensorRef> &params) {
    if (m_.size() != params.size())
        throw RuntimeFailure("Adam: step called before init or group changed");
    double sq = 0.0;
    for (const TensorRef &p : params)
        sq += p.grad->squaredNorm();
    const double norm = std::sqrt(sq);
    const double scale =
        (clip_norm > 0.0 && norm > clip_norm) ? clip_norm / norm : 1.0;

    ++t_;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Mat g = *params[i].grad * scale;
        m_[i] = beta1 * m_[i] + (1.0 - beta1) * g;
        v_[i] = beta2 * v_[i] + (1.0 - beta2) * g.cwiseProduct(g);
        const Mat mhat = m_[i] / bc1;
        const Mat vhat = v_[i] / bc2;
        params[i].value->array() -=
            lr * mhat.array() / (vhat.array().sqrt() + eps);
    }
}

void polyak_update(const std::vector<TensorRef> &target,
                   const std::vector<TensorRef> &online, double tau) {
    if (target.size() != online.size())
        throw RuntimeFailure("polyak_update: group size mismatch");
    for (std::size_t i = 0; i < target.size(); ++i)
        *target[i].value =
            (1.0 - tau) * (*target[i].value) + tau * (*online[i].value);
}

void copy_tensors(const std::vector<TensorRef> &target,
                  const std::vector<TensorRef> &online) {
    if (target.size() != online.size())
        throw RuntimeFailure("copy_tensors: group size mismatch");
    for (std::size_t i = 0; i < target.size(); ++i)
        *target[i].value = *online[i].value;
}

void save_tensors(const std::string &path,
                  const std::vector<TensorRef> &tensors) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw RuntimeFailure("save_tensors: cannot open " + path);
    const char magic[4] = {'V', 'A', 'T', 'S'};
    out.write(magic, 4);
    const std::uint32_t version = 1;
    out.write(reinterpret_cast<const char *>(&version), sizeof(version));
    const std::uint64_t count = tensors.size();
    out.write(reinterpret_cast<const char *>(&count), sizeof(count));
    for (const TensorRef &t : tensors) {
        const std::uint32_t len = static_cast<std::uint32_t>(t.name.size());
        out.write(reinterpret_cast<const char *>(&len), sizeof(len));
        out.write(t.name.data(), len);
        const std::int64_t rows = t.value->rows();
        const std::int64_t cols = t.value->cols();
        out.write(reinterpret_cast<const char *>(&rows), sizeof(rows));
        out.write(reinterpret_cast<const char *>(&cols), sizeof(cols));
        out.write(reinterpret_cast<const char *>(t.value->data()),
                  static_cast<std::streamsize>(sizeof(double)) * rows * cols);
    }
    if (!out)
        throw RuntimeFailure("save_tensors: write failed for " + path);
}

void load_tensors(const std::string &path,
                  const std::vector<TensorRef> &tensors) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw RuntimeFailure("load_tensors: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || magic[0] != 'V' || magic[1] != 'A' || magic[2] != 'T' ||
        magic[3] != 'S')
        throw RuntimeFailure("load_tensors: not a tensor file: " + path);
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char *>(&version), sizeof(version));
    if (version != 1)
        throw RuntimeFailure("load_tensors: unsupported version");
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char *>(&count), sizeof(count));
    if (count != tensors.size())
        throw RuntimeFailure("load_tensors: tensor count mismatch");
    for (const TensorRef &t : tensors) {
        std::uint32_t len = 0;
        in.read(reinterpret_cast<char *>(&len), sizeof(len));
        std::string name(len, '\0');
        in.read(name.data(), len);
        std::int64_t rows = 0, cols = 0;
        in.read(reinterpret_cast<char *>(&rows), sizeof(rows));
        in.read(reinterpret_cast<char *>(&cols), sizeof(cols));
        if (!in || name != t.name || rows != t.value->rows() ||
            cols != t.value->cols())
            throw RuntimeFailure("load_tensors: layout mismatch at tensor '" +
                                 name + "' (expected '" + t.name + "')");
        in.read(reinterpret_cast<char *>(t.value->data()),
                static_cast<std::streamsize>(sizeof(double)) * rows * cols);
    }
    if (!in)
        throw RuntimeFailure("load_tensors: truncated file: " + path);
}

GaussianPolicy::GaussianPolicy(int obs_dim, int act_dim, int hidden,
                               RngStream &rng)
    : trunk({obs_dim, hidden, hidden}, Act::Relu, Act::Relu, rng),
      mean_head(hidden, act_dim, true, rng),
      logstd_head(hidden, act_dim, true, rng) {}

PolicySample GaussianPolicy::sample_with_noise(const Mat &obs,
                                               const Mat &eps) const {
    PolicySample s;
    s.trunk_out = trunk.forward(obs, s.trunk_cache);
    s.mean = mean_head.forward(s.trunk_out);
    s.logstd_raw = logstd_head.forward(s.trunk_out);
    s.logstd = s.logstd_raw.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
    s.stddev = s.logstd.array().exp().matrix();
    s.eps = eps;
    s.pre_tanh = s.mean + s.stddev.cwiseProduct(s.eps);
    s.action = s.pre_tanh.array().tanh().matrix();
    s.logprob = Mat::Zero(obs.rows(), 1);
    for (Eigen::Index i = 0; i < obs.rows(); ++i) {
        double lp = 0.0;
        for (Eigen::Index j = 0; j < s.action.cols(); ++j) {
            const double u = s.pre_tanh(i, j);
            lp += -0.5 * s.eps(i, j) * s.eps(i, j) - s.logstd(i, j) -
                  0.5 * kLog2Pi;
            lp -= 2.0 * (kLog2 - u - softplus(-2.0 * u));
        }
        s.logprob(i, 0) = lp;
    }
    return s;
}

PolicySample GaussianPolicy::sample(const Mat &obs, RngStream &rng) const {
    Mat eps(obs.rows(), act_dim());
    for (Eigen::Index i = 0; i < eps.rows(); ++i)
        for (Eigen::Index j = 0; j < eps.cols(); ++j)
            eps(i, j) = rng.normal();
    return sample_with_noise(obs, eps);
}

Mat GaussianPolicy::mean_action(const Mat &obs) const {
    return mean_head.forward(trunk.forward(obs)).array().tanh().matrix();
}

void GaussianPolicy::backward(const PolicySample &s, const Mat &d_action,
                              const Mat &d_logprob) {
    const Eigen::Index batch = s.action.rows();
    const Eigen::Index adim = s.action.cols();
    Mat du(batch, adim), dls(batch, adim);
    for (Eigen::Index i = 0; i < batch; ++i) {
        const double dlp = d_logprob(i, 0);
        for (Eigen::Index j = 0; j < adim; ++j) {
            const double a = s.action(i, j);
            // d logp / du = 2*tanh(u); d a / du = 1 - a^2
            const double du_ij = d_action(i, j) * (1.0 - a * a) + dlp * 2.0 * a;
            du(i, j) = du_ij;
            const bool clamped = s.logstd_raw(i, j) < kLogStdMin ||
                                 s.logstd_raw(i, j) > kLogStdMax;
            // u depends on logstd through sigma*eps; logp has the explicit
            // -logstd term on top of that.
            const double d_ls =
                du_ij * s.stddev(i, j) * s.eps(i, j) - dlp;
            dls(i, j) = clamped ? 0.0 : d_ls;
        }
    }
    Mat dtrunk = mean_head.backward(s.trunk_out, du);
    dtrunk += logstd_head.backward(s.trunk_out, dls);
    trunk.backward(s.trunk_cache, dtrunk);
}

void GaussianPolicy::zero_grad() {
    trunk.zero_grad();
    mean_head.zero_grad();
    logstd_head.zero_grad();
}

void GaussianPolicy::collect(const std::string &prefix,
                             std::vector<TensorRef> &out) {
    trunk.collect(prefix + ".trunk", out);
    mean_head.collect(prefix + ".mean", out);
    logstd_head.collect(prefix + ".logstd", out);
}

SharedAttention::SharedAttention(int embed_dim, int act_dim, int attn_dim,
                                 RngStream &rng)
    : wq(embed_dim, attn_dim, false, rng), wk(act_dim, attn_dim, false, rng),
      wv(act_dim, attn_dim, false, rng) {}

void SharedAttention::zero_grad() {
    wq.zero_grad();
    wk.zero_grad();
    wv.zero_grad();
}

void SharedAttention::collect(const std::string &prefix,
                              std::vector<TensorRef> &out) {
    wq.collect(prefix + ".wq", out);
    wk.collect(prefix + ".wk", out);
    wv.collect(prefix + ".wv", out);
}

AttentionCritic::AttentionCritic(int obs_dim, int act_dim, int n_agents_,
                                 int agent_index_, int hidden, int attn_dim,
                                 CriticKind kind_, RngStream &rng)
    : kind(kind_), agent_index(agent_index_), n_agents(n_agents_),
      action_dim(act_dim) {
    embed = Mlp({obs_dim + act_dim, hidden}, Act::Relu, Act::Relu, rng);
    const int pooled = kind == CriticKind::Attention
                           ? attn_dim
                           : (n_agents - 1) * act_dim;
    head = Mlp({hidden + pooled, hidden, hidden, 1}, Act::Relu, Act::None, rng);
}

Mat AttentionCritic::forward(const Mat &obs, const std::vector<Mat> &actions,
                             SharedAttention *att, CriticCache &cache) const {
    if (static_cast<int>(actions.size()) != n_agents)
        throw RuntimeFailure("AttentionCritic: one action block per agent");
    const Eigen::Index batch = obs.rows();

    cache.obs_act.resize(batch, obs.cols() + action_dim);
    cache.obs_act << obs, actions[static_cast<std::size_t>(agent_index)];
    cache.e = embed.forward(cache.obs_act, cache.embed_cache);

    if (kind == CriticKind::Attention) {
        if (att == nullptr)
            throw RuntimeFailure("AttentionCritic: shared projections missing");
        const int dk = att->attn_dim();
        const int others = n_agents - 1;
        cache.q = att->wq.forward(cache.e);
        cache.other_actions.clear();
        cache.keys.clear();
        cache.values.clear();
        cache.attended = Mat::Zero(batch, dk);
        if (others > 0) {
            Mat logits(batch, others);
            int col = 0;
            for (int nagent = 0; nagent < n_agents; ++nagent) {
                if (nagent == agent_index)
                    continue;
                const Mat &a = actions[static_cast<std::size_t>(nagent)];
                cache.other_actions.push_back(a);
                cache.keys.push_back(att->wk.forward(a));
                cache.values.push_back(att->wv.forward(a));
                logits.col(col) = ((cache.q.array() *
                                    cache.keys.back().array())
                                       .rowwise()
                                       .sum() /
                                   std::sqrt(static_cast<double>(dk)))
                                      .matrix();
                ++col;
            }
            // Row-wise stable softmax over the other agents.
            cache.scores.resize(batch, others);
            for (Eigen::Index i = 0; i < batch; ++i) {
                const double mx = logits.row(i).maxCoeff();
                Eigen::RowVectorXd ex =
                    (logits.row(i).array() - mx).exp().matrix();
                cache.scores.row(i) = ex / ex.sum();
            }
            for (int j = 0; j < others; ++j)
                cache.attended.array() +=
                    cache.values[static_cast<std::size_t>(j)].array().colwise() *
                    cache.scores.col(j).array();
        } else {
            cache.scores.resize(batch, 0);
        }
        cache.head_in.resize(batch, cache.e.cols() + dk);
        cache.head_in << cache.e, cache.attended;
    } else {
        const int others = n_agents - 1;
        cache.head_in.resize(batch, cache.e.cols() +
                                        static_cast<Eigen::Index>(others) *
                                            action_dim);
        cache.head_in.leftCols(cache.e.cols()) = cache.e;
        Eigen::Index off = cache.e.cols();
        for (int nagent = 0; nagent < n_agents; ++nagent) {
            if (nagent == agent_index)
                continue;
            cache.head_in.middleCols(off, action_dim) =
                actions[static_cast<std::size_t>(nagent)];
            off += action_dim;
        }
    }
    cache.q_value = head.forward(cache.head_in, cache.head_cache);
    return cache.q_value;
}

Mat AttentionCritic::backward(const CriticCache &cache, const Mat &dq,
                              SharedAttention *att) {
    Mat dhead_in = head.backward(cache.head_cache, dq);
    const Eigen::Index ecols = cache.e.cols();
    Mat de = dhead_in.leftCols(ecols);

    if (kind == CriticKind::Attention) {
        if (att == nullptr)
            throw RuntimeFailure("AttentionCritic: shared projections missing");
        const int dk = att->attn_dim();
        const int others = n_agents - 1;
        const Mat dx = dhead_in.rightCols(dk);
        if (others > 0) {
            Mat dscores(dx.rows(), others);
            for (int j = 0; j < others; ++j)
                dscores.col(j) =
                    (dx.array() *
                     cache.values[static_cast<std::size_t>(j)].array())
                        .rowwise()
                        .sum()
                        .matrix();
            const Eigen::VectorXd dot =
                (dscores.array() * cache.scores.array())
                    .rowwise()
                    .sum()
                    .matrix();
            const Mat dlogits =
                (cache.scores.array() *
                 (dscores.array().colwise() - dot.array()))
                    .matrix();
            Mat dquery = Mat::Zero(dx.rows(), dk);
            int col = 0;
            for (int nagent = 0; nagent < n_agents; ++nagent) {
                if (nagent == agent_index)
                    continue;
                const std::size_t j = static_cast<std::size_t>(col);
                const double inv = 1.0 / std::sqrt(static_cast<double>(dk));
                const Mat dvalue =
                    (dx.array().colwise() * cache.scores.col(col).array())
                        .matrix();
                const Mat dkey =
                    (cache.q.array().colwise() *
                     (dlogits.col(col).array() * inv))
                        .matrix();
                dquery.array() += cache.keys[j].array().colwise() *
                                  (dlogits.col(col).array() * inv);
                // Gradients flow into the shared projections; the other
                // agents' actions come from the replay buffer, so their
                // input gradients are dropped.
                (void)att->wk.backward(cache.other_actions[j], dkey);
                (void)att->wv.backward(cache.other_actions[j], dvalue);
                ++col;
            }
            de += att->wq.backward(cache.e, dquery);
        } else {
            de += att->wq.backward(cache.e, Mat::Zero(dx.rows(), dk));
        }
    }

    Mat dobs_act = embed.backward(cache.embed_cache, de);
    return dobs_act.rightCols(action_dim);
}

void AttentionCritic::zero_grad() {
    embed.zero_grad();
    head.zero_grad();
}

void AttentionCritic::collect(const std::string &prefix,
                              std::vector<TensorRef> &out) {
    embed.collect(prefix + ".embed", out);
    head.collect(prefix + ".head", out);
}

} // namespace vaairs::nn
