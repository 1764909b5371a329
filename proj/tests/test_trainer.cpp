// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "core/errors.hpp"
#include "core/trainer.hpp"

using namespace vaairs;

namespace {

ScenarioParams tiny_scenario(int n = 2) {
    ScenarioParams s;
    s.num_uavs = n;
    s.horizon = 4;
    s.quadrature_deg = 6.0;
    s.sll_grid_deg = 3.0;
    s.channel.rows = 2;
    s.channel.cols = 2;
    return s;
}

TrainerConfig tiny_config() {
    TrainerConfig c;
    c.episodes = 6;
    c.batch_size = 8;
    c.warmup_transitions = 8;
    c.hidden_width = 8;
    c.attention_dim = 4;
    c.buffer_capacity = 500;
    c.updates_per_step = 1;
    return c;
}

Transition random_transition(int n_agents, int obs_dim, RngStream &rng) {
    Transition t;
    t.obs = Eigen::VectorXd::NullaryExpr(obs_dim, [&](Eigen::Index) {
        return rng.uniform(-1.0, 1.0);
    });
    t.next_obs = Eigen::VectorXd::NullaryExpr(obs_dim, [&](Eigen::Index) {
        return rng.uniform(-1.0, 1.0);
    });
    t.actions = Eigen::MatrixXd::NullaryExpr(
        n_agents, Environment::kActionDim,
        [&](Eigen::Index, Eigen::Index) { return rng.uniform(-1.0, 1.0); });
    t.rewards = Eigen::VectorXd::NullaryExpr(
        n_agents, [&](Eigen::Index) { return rng.normal(); });
    return t;
}

ReplayBuffer::Batch filled_batch(int n_agents, int obs_dim, int batch,
                                 std::uint64_t seed) {
    RngStream rng(seed);
    ReplayBuffer buf(64);
    for (int i = 0; i < 32; ++i)
        buf.push(random_transition(n_agents, obs_dim, rng));
    return buf.sample(static_cast<std::size_t>(batch), rng);
}

} // namespace

TEST_CASE("algorithm names round trip") {
    CHECK(algorithm_from_string("hmca") == Algorithm::Hmca);
    CHECK(algorithm_from_string("masac_plain") == Algorithm::MasacPlain);
    CHECK(algorithm_from_string("random") == Algorithm::Random);
    CHECK(algorithm_name(Algorithm::Hmca) == "hmca");
    CHECK_THROWS_AS(algorithm_from_string("sac"), ConfigError);
}

TEST_CASE("squashed actions map onto physical commands") {
    Eigen::RowVectorXd hi(4), lo(4), mid(4);
    hi << 1, 1, 1, 1;
    lo << -1, -1, -1, -1;
    mid << 0, 0, 0, 0;
    UavAction a = physical_action(hi, 20.0, 5.0);
    CHECK(a.weight == doctest::Approx(1.0));
    CHECK(a.speed == doctest::Approx(20.0));
    CHECK(a.direction == doctest::Approx(2 * kPi));
    CHECK(a.climb == doctest::Approx(5.0));
    UavAction b = physical_action(lo, 20.0, 5.0);
    CHECK(b.weight == doctest::Approx(0.0));
    CHECK(b.speed == doctest::Approx(0.0));
    CHECK(b.direction == doctest::Approx(0.0));
    CHECK(b.climb == doctest::Approx(-5.0));
    UavAction c = physical_action(mid, 20.0, 5.0);
    CHECK(c.weight == doctest::Approx(0.5));
    CHECK(c.speed == doctest::Approx(10.0));
    CHECK(c.direction == doctest::Approx(kPi));
    CHECK(c.climb == doctest::Approx(0.0));
    Eigen::RowVectorXd bad(3);
    bad << 0, 0, 0;
    CHECK_THROWS_AS(physical_action(bad, 20.0, 5.0), RuntimeFailure);
}

TEST_CASE("replay buffer is a ring") {
    RngStream rng(5);
    ReplayBuffer buf(3);
    for (int i = 0; i < 5; ++i) {
        Transition t = random_transition(2, 10, rng);
        t.rewards.setConstant(static_cast<double>(i));
        buf.push(std::move(t));
    }
    CHECK(buf.size() == 3);
    // oldest two entries (0, 1) must be gone
    std::set<int> seen;
    for (int k = 0; k < 200; ++k) {
        ReplayBuffer::Batch b = buf.sample(4, rng);
        for (int i = 0; i < 4; ++i)
            seen.insert(static_cast<int>(b.rewards(i, 0)));
    }
    CHECK(seen == std::set<int>{2, 3, 4});
}

TEST_CASE("replay batch keeps rows aligned across fields") {
    RngStream rng(6);
    ReplayBuffer buf(16);
    for (int i = 0; i < 10; ++i) {
        Transition t = random_transition(2, 10, rng);
        // tie every field to the same marker so alignment is checkable
        const double mark = static_cast<double>(i);
        t.obs.setConstant(mark);
        t.next_obs.setConstant(mark + 0.5);
        t.actions.setConstant(mark * 0.1);
        t.rewards.setConstant(-mark);
        buf.push(std::move(t));
    }
    ReplayBuffer::Batch b = buf.sample(6, rng);
    for (int i = 0; i < 6; ++i) {
        const double mark = b.obs(i, 0);
        CHECK(b.next_obs(i, 0) == doctest::Approx(mark + 0.5));
        CHECK(b.rewards(i, 0) == doctest::Approx(-mark));
        CHECK(b.actions[0](i, 0) == doctest::Approx(mark * 0.1));
        CHECK(b.actions[1](i, 0) == doctest::Approx(mark * 0.1));
    }
}

TEST_CASE("gravity blend fades from the energy-optimal pull to the policy") {
    ScenarioParams s = tiny_scenario();
    TrainerConfig c = tiny_config();
    c.episodes = 10;
    c.gravity_noise_std = 0.0; // pull is exactly the optimal speed
    MasacTrainer tr(s, c, Algorithm::Hmca, 1);
    const double vme = tr.energy_optimal_speed_hint();
    CHECK(vme > 0.0);
    CHECK(vme < s.v_max);
    RngStream rng(2);
    // final episode: pure policy
    CHECK(tr.gravity_speed(7.0, 9, rng) == doctest::Approx(7.0));
    // first episode: 10% policy, 90% pull
    CHECK(tr.gravity_speed(7.0, 0, rng) ==
          doctest::Approx(0.1 * 7.0 + 0.9 * vme));
    // clamped at the caps
    CHECK(tr.gravity_speed(1000.0, 9, rng) == doctest::Approx(s.v_max));
    CHECK(tr.gravity_speed(-50.0, 9, rng) == doctest::Approx(0.0));
}

TEST_CASE("soft targets reproduce the formula through the exposed networks") {
    ScenarioParams s = tiny_scenario();
    TrainerConfig c = tiny_config();
    for (Algorithm algo : {Algorithm::Hmca, Algorithm::MasacPlain}) {
        CAPTURE(algorithm_name(algo));
        MasacTrainer tr(s, c, algo, 7);
        const int n = s.num_uavs, obs_dim = 3 * n + 4;
        ReplayBuffer::Batch batch = filled_batch(n, obs_dim, 8, 11);
        RngStream r1(42), r2(42);
        std::vector<nn::Mat> ys = tr.soft_targets(batch, r1);
        REQUIRE(static_cast<int>(ys.size()) == n);
        // replay the same draw order through the exposed target networks
        std::vector<nn::Mat> na(n), nl(n);
        for (int m = 0; m < n; ++m) {
            nn::PolicySample ps = tr.target_actors()[m].sample(batch.next_obs, r2);
            na[m] = ps.action;
            nl[m] = ps.logprob;
        }
        for (int m = 0; m < n; ++m) {
            nn::CriticCache cache;
            nn::Mat qbar = tr.target_critics()[m].forward(
                batch.next_obs, na, tr.target_shared_attention(), cache);
            nn::Mat y = batch.rewards.col(m) +
                        c.gamma * (qbar - c.alpha * nl[m]);
            CHECK((y - ys[m]).norm() < 1e-12);
        }
    }
}

TEST_CASE("zero discount reduces the target to the reward") {
    ScenarioParams s = tiny_scenario();
    TrainerConfig c = tiny_config();
    c.gamma = 0.0;
    MasacTrainer tr(s, c, Algorithm::Hmca, 3);
    ReplayBuffer::Batch batch = filled_batch(2, 10, 8, 13);
    RngStream rng(1);
    std::vector<nn::Mat> ys = tr.soft_targets(batch, rng);
    for (int m = 0; m < 2; ++m)
        CHECK((ys[m] - batch.rewards.col(m)).norm() < 1e-15);
}

TEST_CASE("target networks start as copies of the online networks") {
    ScenarioParams s = tiny_scenario();
    MasacTrainer tr(s, tiny_config(), Algorithm::Hmca, 17);
    ReplayBuffer::Batch batch = filled_batch(2, 10, 8, 17);
    // mean actions agree before any update
    for (int m = 0; m < 2; ++m)
        CHECK((tr.actors()[m].mean_action(batch.obs) -
               tr.target_actors()[m].mean_action(batch.obs))
                  .norm() < 1e-15);
    nn::CriticCache c1, c2;
    nn::Mat q1 = tr.critics()[0].forward(batch.obs, batch.actions,
                                         tr.shared_attention(), c1);
    nn::Mat q2 = tr.target_critics()[0].forward(batch.obs, batch.actions,
                                                tr.target_shared_attention(),
                                                c2);
    CHECK((q1 - q2).norm() < 1e-15);
}

TEST_CASE("one update round moves the networks and polyaks the targets") {
    ScenarioParams s = tiny_scenario();
    TrainerConfig c = tiny_config();
    for (Algorithm algo : {Algorithm::Hmca, Algorithm::MasacPlain}) {
        CAPTURE(algorithm_name(algo));
        MasacTrainer tr(s, c, algo, 23);
        ReplayBuffer::Batch batch = filled_batch(2, 10, 8, 19);

        // snapshot everything before the round
        std::vector<nn::TensorRef> all = tr.all_tensors();
        std::vector<nn::Mat> before;
        std::vector<std::string> names;
        for (auto &t : all) {
            before.push_back(*t.value);
            names.push_back(t.name);
        }

        RngStream rng(4);
        UpdateStats stats = tr.update_round(batch, rng);
        REQUIRE(stats.critic_loss.size() == 2);
        REQUIRE(stats.actor_loss.size() == 2);
        for (double l : stats.critic_loss) {
            CHECK(std::isfinite(l));
            CHECK(l >= 0.0);
        }

        double actor_delta = 0.0, critic_delta = 0.0;
        for (std::size_t i = 0; i < all.size(); ++i) {
            const std::string &nm = names[i];
            const double d = (*all[i].value - before[i]).norm();
            if (nm.rfind("target.", 0) == 0) {
                // every target tensor obeys the soft-update identity:
                // new_target = (1-tau)*old_target + tau*new_online
                const std::string online_name = nm.substr(7);
                for (std::size_t j = 0; j < all.size(); ++j) {
                    if (names[j] != online_name)
                        continue;
                    nn::Mat expect = (1.0 - c.tau) * before[i] +
                                     c.tau * (*all[j].value);
                    CHECK((*all[i].value - expect).norm() < 1e-12);
                }
            } else if (nm.rfind("actor", 0) == 0) {
                actor_delta += d;
            } else {
                critic_delta += d;
            }
        }
        CHECK(actor_delta > 0.0);
        CHECK(critic_delta > 0.0);
    }
}

TEST_CASE("random baseline refuses gradient machinery") {
    ScenarioParams s = tiny_scenario();
    MasacTrainer tr(s, tiny_config(), Algorithm::Random, 5);
    ReplayBuffer::Batch batch = filled_batch(2, 10, 8, 23);
    RngStream rng(1);
    CHECK_THROWS_AS(tr.update_round(batch, rng), RuntimeFailure);
    CHECK_THROWS_AS(tr.save_checkpoint("x.bin"), RuntimeFailure);
}

TEST_CASE("training runs are byte-identical across reruns") {
    auto run = [](std::uint64_t seed) {
        ScenarioParams s = tiny_scenario();
        Environment env(s, RewardWeights{}, 100);
        MasacTrainer tr(s, tiny_config(), Algorithm::Hmca, seed);
        std::ostringstream metrics;
        tr.train(env, &metrics);
        return metrics.str();
    };
    std::string a = run(9), b = run(9), c = run(10);
    CHECK(a == b);
    CHECK(a != c);
    // header shape
    CHECK(a.rfind("episode,reward_a0,reward_a1,secrecy_mbps,max_sll,"
                  "energy_kj,violations\n",
                  0) == 0);
    // one row per episode plus the header
    CHECK(std::count(a.begin(), a.end(), '\n') == 6 + 1);
}

TEST_CASE("training fills the log with finite numbers") {
    ScenarioParams s = tiny_scenario();
    Environment env(s, RewardWeights{}, 100);
    MasacTrainer tr(s, tiny_config(), Algorithm::MasacPlain, 31);
    TrainLog log = tr.train(env, nullptr);
    REQUIRE(log.rows.size() == 6);
    for (const EpisodeRow &row : log.rows) {
        CHECK(std::isfinite(row.mean_reward()));
        CHECK(std::isfinite(row.secrecy_mbps));
        CHECK(row.max_sidelobe > 0.0);
        CHECK(std::isfinite(row.energy_kj));
        CHECK(row.violations >= 0);
    }
}

TEST_CASE("evaluation is deterministic and logs full trajectories") {
    ScenarioParams s = tiny_scenario();
    auto run = [&](Algorithm algo) {
        Environment env(s, RewardWeights{}, 50);
        MasacTrainer tr(s, tiny_config(), algo, 77);
        std::ostringstream traj;
        EvalSummary sum = tr.evaluate(env, 3, &traj);
        return std::make_pair(sum, traj.str());
    };
    for (Algorithm algo : {Algorithm::Hmca, Algorithm::Random}) {
        CAPTURE(algorithm_name(algo));
        auto [s1, t1] = run(algo);
        auto [s2, t2] = run(algo);
        CHECK(s1.reward_mean == s2.reward_mean);
        CHECK(s1.secrecy_mbps_mean == s2.secrecy_mbps_mean);
        CHECK(t1 == t2);
        CHECK(s1.episodes == 3);
        CHECK(t1.rfind("episode,t,uav,x,y,z\n", 0) == 0);
        // header + episodes * agents * (horizon + 1) position rows
        CHECK(std::count(t1.begin(), t1.end(), '\n') == 1 + 3 * 2 * (4 + 1));
    }
}

TEST_CASE("checkpoints restore the exact parameter state") {
    ScenarioParams s = tiny_scenario();
    TrainerConfig c = tiny_config();
    MasacTrainer a(s, c, Algorithm::Hmca, 41);
    MasacTrainer b(s, c, Algorithm::Hmca, 42); // different init
    const std::string path = "trainer_ckpt.bin";
    a.save_checkpoint(path);
    // b differs before, equals after
    bool differed = false;
    std::vector<nn::TensorRef> ta = a.all_tensors(), tb = b.all_tensors();
    for (std::size_t i = 0; i < ta.size(); ++i)
        if ((*ta[i].value - *tb[i].value).norm() > 0)
            differed = true;
    CHECK(differed);
    b.load_checkpoint(path);
    for (std::size_t i = 0; i < ta.size(); ++i)
        CHECK((*ta[i].value - *tb[i].value).norm() == 0.0);
    // mismatched architecture refuses the file
    TrainerConfig cw = c;
    cw.hidden_width = 16;
    MasacTrainer w(s, cw, Algorithm::Hmca, 43);
    CHECK_THROWS_AS(w.load_checkpoint(path), RuntimeFailure);
    std::remove(path.c_str());
}

TEST_CASE("trainer rejects a mismatched environment") {
    MasacTrainer tr(tiny_scenario(2), tiny_config(), Algorithm::Hmca, 1);
    Environment env3(tiny_scenario(3), RewardWeights{}, 1);
    CHECK_THROWS_AS(tr.train(env3, nullptr), RuntimeFailure);
    CHECK_THROWS_AS(tr.evaluate(env3, 1, nullptr), RuntimeFailure);
}

TEST_CASE("trainer config validation") {
    TrainerConfig c = tiny_config();
    CHECK_NOTHROW(c.validate());
    c.gamma = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = tiny_config();
    c.tau = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = tiny_config();
    c.batch_size = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
