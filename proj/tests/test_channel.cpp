// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>

#include "core/channel.hpp"
#include "core/errors.hpp"

using namespace vaairs;

namespace {

ChannelParams small_params() {
    ChannelParams p;
    p.rows = 2;
    p.cols = 2;
    p.row_spacing = p.wavelength / 2.0;
    p.col_spacing = p.wavelength / 2.0;
    return p;
}

VaaConfig two_uavs() {
    VaaConfig cfg;
    cfg.positions = {{-1.0, 0.0, 80.0}, {1.0, 0.0, 80.0}};
    cfg.weights = {1.0, 1.0};
    return cfg;
}

} // namespace

TEST_CASE("steering vector of a broadside bearing is all ones") {
    // vertical angle 0 means sin_vertical = 0: no phase progression
    ChannelParams p = small_params();
    Cvec s = steering_vector({0.0, 1.0, 0.0}, p);
    REQUIRE(s.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(s(i).real() == doctest::Approx(1.0));
        CHECK(s(i).imag() == doctest::Approx(0.0));
    }
}

TEST_CASE("steering vector of a half-wavelength grid at grazing incidence") {
    // sin_vertical = 1, azimuth 0: phase -pi per row index step; with the
    // column-major element order s_r = (s-1)/rows the pattern over the four
    // elements is [0, 0, -pi, -pi] -> values [1, 1, -1, -1].
    ChannelParams p = small_params();
    Cvec s = steering_vector({1.0, 1.0, 0.0}, p);
    REQUIRE(s.size() == 4);
    CHECK(s(0).real() == doctest::Approx(1.0));
    CHECK(s(1).real() == doctest::Approx(1.0));
    CHECK(s(2).real() == doctest::Approx(-1.0));
    CHECK(s(3).real() == doctest::Approx(-1.0));
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(s(i).imag()) < 1e-12);
}

TEST_CASE("steering entries always have unit magnitude") {
    ChannelParams p;
    RngStream rng(2);
    for (int t = 0; t < 20; ++t) {
        LinkTrig trig;
        trig.sin_vertical = rng.uniform();
        double az = rng.uniform() * 2 * kPi;
        trig.cos_horizontal = std::cos(az);
        trig.sin_horizontal = std::sin(az);
        Cvec s = steering_vector(trig, p);
        for (int i = 0; i < s.size(); ++i)
            CHECK(std::abs(s(i)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("array to surface link carries the line-of-sight budget") {
    VaaConfig vaa = two_uavs();
    ChannelParams p = small_params();
    Vec3 center = swarm_centroid(vaa.positions);
    Vec3 irs{40.0, 0.0, 20.0};
    Cvec h = channel_vaa_irs(vaa, center, irs, p);
    double d = distance(center, irs);
    std::complex<double> af = array_factor(vaa, angles_between(center, irs));
    double expected = std::abs(af) * std::sqrt(p.path_loss_ref) / d;
    REQUIRE(h.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(h(i)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("surface to ground mean power matches the path loss law") {
    ChannelParams p = small_params();
    Vec3 irs{0.0, 0.0, 25.0}, user{30.0, 10.0, 0.0};
    double d = distance(irs, user);
    double expected = p.path_loss_ref * std::pow(d, -p.alpha_reflect);
    RngStream rng(99);
    const int n = 200000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        Cvec h = channel_irs_ground(irs, user, p, rng);
        acc += std::norm(h(0));
    }
    CHECK(acc / n == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("huge Rician factor collapses onto the line-of-sight component") {
    ChannelParams p = small_params();
    p.rician_k = 1e12;
    Vec3 irs{0.0, 0.0, 25.0}, user{30.0, 10.0, 0.0};
    RngStream rng(7);
    Cvec h = channel_irs_ground(irs, user, p, rng);
    double d = distance(irs, user);
    double amp = std::sqrt(p.path_loss_ref * std::pow(d, -p.alpha_reflect));
    Cvec los = steering_vector(link_trig(irs, user), p);
    for (int i = 0; i < h.size(); ++i)
        CHECK(std::abs(h(i) - amp * los(i)) < amp * 1e-5);
}

TEST_CASE("array to ground mean power follows the direct exponent") {
    VaaConfig vaa = two_uavs();
    ChannelParams p;
    Vec3 center = swarm_centroid(vaa.positions);
    Vec3 user{100.0, 40.0, 0.0};
    double d = distance(center, user);
    std::complex<double> af = array_factor(vaa, angles_between(center, user));
    double expected =
        std::norm(af) * p.path_loss_ref * std::pow(d, -p.alpha_direct);
    RngStream rng(123);
    const int n = 200000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += std::norm(channel_vaa_ground(vaa, center, user, p, rng));
    CHECK(acc / n == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("slot realization is a pure function of the parent stream") {
    VaaConfig vaa = two_uavs();
    ChannelParams p = small_params();
    Vec3 irs{40.0, 0.0, 20.0}, user{80.0, 10.0, 0.0}, eve{70.0, -15.0, 0.0};
    RngStream parent(555);
    ChannelSet a = realize_channels(vaa, irs, user, eve, p, parent);
    ChannelSet b = realize_channels(vaa, irs, user, eve, p, parent);
    CHECK((a.h_ru - b.h_ru).norm() == 0.0);
    CHECK((a.h_re - b.h_re).norm() == 0.0);
    CHECK(a.h_au == b.h_au);
    CHECK(a.h_ae == b.h_ae);
    CHECK((a.h_ar - b.h_ar).norm() == 0.0);
    // a different parent gives different fading
    ChannelSet c = realize_channels(vaa, irs, user, eve, p, RngStream(556));
    CHECK((a.h_ru - c.h_ru).norm() > 0.0);
    CHECK(a.h_au != c.h_au);
}

TEST_CASE("user and eavesdropper fading are independent draws") {
    VaaConfig vaa = two_uavs();
    ChannelParams p = small_params();
    Vec3 irs{40.0, 0.0, 20.0}, spot{80.0, 10.0, 0.0};
    // same position for both terminals: deterministic parts match, the
    // random parts must not
    ChannelSet s = realize_channels(vaa, irs, spot, spot, p, RngStream(1));
    CHECK((s.h_ru - s.h_re).norm() > 0.0);
    CHECK(s.h_au != s.h_ae);
}

TEST_CASE("parameter validation") {
    ChannelParams p;
    p.rows = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = ChannelParams{};
    p.path_loss_ref = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = ChannelParams{};
    p.rician_k = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = ChannelParams{};
    CHECK_NOTHROW(p.validate());
}
