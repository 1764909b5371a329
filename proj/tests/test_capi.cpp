// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <vaairs.h>

namespace fs = std::filesystem;

namespace {

// Tiny run description reused by most cases.
const char *kQuickJson = R"({
  "scenario": {"num_uavs": 2, "horizon": 4, "quadrature_deg": 6.0,
                "sll_grid_deg": 3.0,
                "channel": {"irs_rows": 2, "irs_cols": 2}},
  "trainer": {"episodes": 3, "batch_size": 6, "warmup_transitions": 6,
               "hidden_width": 8, "attention_dim": 4, "buffer_capacity": 100},
  "execution": {"eval_episodes": 2}
})";

} // namespace

TEST_CASE("version and error strings are always available") {
    CHECK(std::string(vaairs_version()) == std::string("0.1.0"));
    CHECK(vaairs_last_error() != nullptr);
}

TEST_CASE("config lifecycle") {
    vaairs_config *cfg = nullptr;
    REQUIRE(vaairs_config_create(&cfg) == VAAIRS_OK);
    REQUIRE(cfg != nullptr);

    char hash1[17];
    CHECK(vaairs_config_hash(cfg, hash1) == VAAIRS_OK);
    CHECK(std::strlen(hash1) == 16);

    CHECK(vaairs_config_set(cfg, "scenario.num_uavs", "4") == VAAIRS_OK);
    char hash2[17];
    CHECK(vaairs_config_hash(cfg, hash2) == VAAIRS_OK);
    CHECK(std::string(hash1) != std::string(hash2));

    // dump round trips through parse
    size_t needed = 0;
    CHECK(vaairs_config_dump(cfg, nullptr, 0, &needed) == VAAIRS_OK);
    REQUIRE(needed > 0);
    std::vector<char> buf(needed + 1);
    CHECK(vaairs_config_dump(cfg, buf.data(), buf.size(), &needed) ==
          VAAIRS_OK);
    vaairs_config *again = nullptr;
    REQUIRE(vaairs_config_parse(buf.data(), &again) == VAAIRS_OK);
    char hash3[17];
    CHECK(vaairs_config_hash(again, hash3) == VAAIRS_OK);
    CHECK(std::string(hash2) == std::string(hash3));

    vaairs_config_free(again);
    vaairs_config_free(cfg);
    vaairs_config_free(nullptr); // must be a no-op
}

TEST_CASE("errors carry status codes and messages") {
    vaairs_config *cfg = nullptr;
    CHECK(vaairs_config_parse("{\"bogus\": 1}", &cfg) == VAAIRS_ERR_CONFIG);
    CHECK(cfg == nullptr);
    CHECK(std::strlen(vaairs_last_error()) > 0);

    CHECK(vaairs_config_parse(nullptr, &cfg) == VAAIRS_ERR_ARGUMENT);
    CHECK(vaairs_config_create(nullptr) == VAAIRS_ERR_ARGUMENT);
    CHECK(vaairs_config_load("definitely_missing.json", &cfg) ==
          VAAIRS_ERR_CONFIG);

    REQUIRE(vaairs_config_create(&cfg) == VAAIRS_OK);
    CHECK(vaairs_config_set(cfg, "scenario.nope", "1") == VAAIRS_ERR_CONFIG);
    CHECK(vaairs_config_set(cfg, nullptr, "1") == VAAIRS_ERR_ARGUMENT);
    CHECK(vaairs_run(cfg, "fly") == VAAIRS_ERR_CONFIG);
    CHECK(vaairs_run(nullptr, "train") == VAAIRS_ERR_ARGUMENT);
    vaairs_config_free(cfg);
}

TEST_CASE("environment stepping through the C interface") {
    vaairs_config *cfg = nullptr;
    REQUIRE(vaairs_config_parse(kQuickJson, &cfg) == VAAIRS_OK);

    vaairs_env *env = nullptr;
    REQUIRE(vaairs_env_create(cfg, &env) == VAAIRS_OK);
    int32_t n = 0, dim = 0;
    CHECK(vaairs_env_num_agents(env, &n) == VAAIRS_OK);
    CHECK(vaairs_env_obs_dim(env, &dim) == VAAIRS_OK);
    CHECK(n == 2);
    CHECK(dim == 3 * 2 + 4);

    // stepping before reset is a runtime error
    std::vector<double> actions(static_cast<size_t>(n) * 4, 0.0);
    std::vector<double> rewards(static_cast<size_t>(n), 0.0);
    CHECK(vaairs_env_step(env, actions.data(), actions.size(), rewards.data(),
                          rewards.size(), nullptr) == VAAIRS_ERR_RUNTIME);

    REQUIRE(vaairs_env_reset(env) == VAAIRS_OK);
    std::vector<double> obs(static_cast<size_t>(dim));
    REQUIRE(vaairs_env_observe(env, obs.data(), obs.size()) == VAAIRS_OK);
    for (double v : obs) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
    // wrong buffer length is an argument error
    CHECK(vaairs_env_observe(env, obs.data(), obs.size() - 1) ==
          VAAIRS_ERR_ARGUMENT);
    CHECK(vaairs_env_step(env, actions.data(), actions.size() - 1,
                          rewards.data(), rewards.size(), nullptr) ==
          VAAIRS_ERR_ARGUMENT);

    // drive a full episode: 4 slots, the last one reports done
    actions = {0.8, 2.0, 0.5, 0.5, /* agent 1 */ 1.0, 1.0, 3.0, -0.5};
    for (int t = 0; t < 4; ++t) {
        vaairs_step_info info;
        REQUIRE(vaairs_env_step(env, actions.data(), actions.size(),
                                rewards.data(), rewards.size(),
                                &info) == VAAIRS_OK);
        CHECK(info.done == (t == 3 ? 1 : 0));
        CHECK(info.total_energy_j != 0.0);
        CHECK(info.max_sidelobe > 0.0);
        CHECK(info.rate_user_bps >= 0.0);
        CHECK(info.rate_eve_bps >= 0.0);
        CHECK(info.secrecy_rate_bps ==
              doctest::Approx(info.rate_user_bps - info.rate_eve_bps));
        for (double r : rewards) CHECK(std::isfinite(r));
    }
    // episode over: another step fails, reset starts the next one
    CHECK(vaairs_env_step(env, actions.data(), actions.size(), rewards.data(),
                          rewards.size(), nullptr) == VAAIRS_ERR_RUNTIME);
    CHECK(vaairs_env_reset(env) == VAAIRS_OK);
    CHECK(vaairs_env_step(env, actions.data(), actions.size(), rewards.data(),
                          rewards.size(), nullptr) == VAAIRS_OK);

    vaairs_env_free(env);
    vaairs_env_free(nullptr);
    vaairs_config_free(cfg);
}

TEST_CASE("environment seeding matches across instances") {
    vaairs_config *cfg = nullptr;
    REQUIRE(vaairs_config_parse(kQuickJson, &cfg) == VAAIRS_OK);
    auto first_obs = [&](void) {
        vaairs_env *env = nullptr;
        REQUIRE(vaairs_env_create(cfg, &env) == VAAIRS_OK);
        REQUIRE(vaairs_env_reset(env) == VAAIRS_OK);
        std::vector<double> obs(10);
        REQUIRE(vaairs_env_observe(env, obs.data(), obs.size()) == VAAIRS_OK);
        vaairs_env_free(env);
        return obs;
    };
    std::vector<double> a = first_obs(), b = first_obs();
    CHECK(a == b);
    REQUIRE(vaairs_config_set(cfg, "execution.seed", "99") == VAAIRS_OK);
    std::vector<double> c = first_obs();
    CHECK(a != c);
    vaairs_config_free(cfg);
}

TEST_CASE("a full run through the C interface writes its files") {
    fs::remove_all("capi_test_runs");
    vaairs_config *cfg = nullptr;
    REQUIRE(vaairs_config_parse(kQuickJson, &cfg) == VAAIRS_OK);
    REQUIRE(vaairs_config_set(cfg, "execution.algorithm", "random") ==
            VAAIRS_OK);
    REQUIRE(vaairs_config_set_out_dir(cfg, "capi_test_runs/train") ==
            VAAIRS_OK);
    REQUIRE(vaairs_config_set_seed(cfg, 7) == VAAIRS_OK);
    CHECK(vaairs_run(cfg, "train") == VAAIRS_OK);
    CHECK(fs::exists("capi_test_runs/train/metrics.csv"));
    CHECK(fs::exists("capi_test_runs/train/manifest.json"));
    CHECK(vaairs_run(cfg, "export") == VAAIRS_OK);
    CHECK(fs::exists("capi_test_runs/train/plots/convergence.csv"));
    vaairs_config_free(cfg);
}
