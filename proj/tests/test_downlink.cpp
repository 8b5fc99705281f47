// SPDX-License-Identifier: Apache-2.0
//
// stsim: randomized space-time coded stacked metasurface downlink simulator
// Copyright (C) 2026 stsim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "stsim/downlink.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace stsim;

namespace
{
    std::vector<UserChannel> unit_users(const cmat &h)
    {
        std::vector<UserChannel> users(h.cols());
        for (Eigen::Index u = 0; u < h.cols(); ++u)
        {
            users[u].fading = h.col(u);
            users[u].pathloss = 1.0;
        }
        return users;
    }
}

TEST_CASE("scenario derived quantities")
{
    DownlinkScenario s;
    // -174 dBm/Hz + 70 dB(10 MHz) - 15 dBm
    CHECK(s.noise_over_energy() == doctest::Approx(std::pow(10.0, -11.9)).epsilon(1e-12));
    const double lambda = 3e8 / 28e9;
    const double fs = lambda / (4 * kPi);
    CHECK(s.pathloss(20.0) == doctest::Approx(fs * fs * std::pow(20.0, -2.2)).epsilon(1e-12));
    s.reference_distance = 2.0;
    s.pathloss_exponent = 3.0;
    const double fs2 = lambda / (4 * kPi * 2.0);
    CHECK(s.pathloss(20.0) == doctest::Approx(fs2 * fs2 * std::pow(0.1, 3.0)).epsilon(1e-12));

    DownlinkScenario bad;
    bad.inner_radius = 60;
    bad.user_count = 0;
    bad.slot_count = 0;
    CHECK(bad.violations().size() == 3);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("user drops")
{
    DownlinkScenario s;
    s.user_count = 10000;
    const int v = 9;
    const auto users = drop_users(s, v, 12);
    REQUIRE(users.size() == 10000);

    double mean_h = 0.0;
    std::vector<double> radii;
    for (const auto &u : users)
    {
        CHECK(u.position[2] == 0.0);
        const double r = std::hypot(u.position[0], u.position[1]);
        radii.push_back(r);
        CHECK(u.distance == doctest::Approx(std::hypot(r, s.bs_height)));
        CHECK(u.distance >= std::sqrt(200.0) - 1e-12);
        CHECK(u.distance <= std::sqrt(50.0 * 50.0 + 100.0) + 1e-12);
        CHECK(u.pathloss == doctest::Approx(s.pathloss(u.distance)));
        CHECK(u.fading.size() == v);
        mean_h += u.fading.squaredNorm();
    }
    mean_h /= users.size();
    CHECK(mean_h >= 0.98);
    CHECK(mean_h <= 1.02);

    const double ri2 = 100.0, ro2 = 2500.0;
    const double ks = oracle::ks_statistic(radii, [&](double r) { return (r * r - ri2) / (ro2 - ri2); });
    CHECK(ks < oracle::ks_critical_1pct(radii.size()));

    // smaller populations are prefixes of larger ones
    s.user_count = 50;
    const auto prefix = drop_users(s, v, 12);
    for (int u = 0; u < 50; ++u)
        CHECK((prefix[u].fading - users[u].fading).norm() == 0.0);
    CHECK_THROWS_AS(drop_users(s, 0, 1), ConfigError);
}

TEST_CASE("effective channels")
{
    std::mt19937_64 e(1);
    SUBCASE("explicit double loop")
    {
        const cmat g = oracle::random_complex(4, 2, e);
        const cmat h = oracle::random_complex(4, 3, e);
        auto users = unit_users(h);
        for (int u = 0; u < 3; ++u)
            users[u].pathloss = 0.5 + u;
        const cmat c = effective_channels(users, g);
        for (int u = 0; u < 3; ++u)
            for (int n = 0; n < 2; ++n)
            {
                cdouble sum = 0.0;
                for (int v = 0; v < 4; ++v)
                    sum += std::conj(h(v, u)) * g(v, n);
                CHECK(std::abs(c(u, n) - std::sqrt(users[u].pathloss) * sum) < 1e-13);
            }
    }
    SUBCASE("orthogonal and matched users")
    {
        cmat g = cmat::Zero(3, 2);
        g(0, 0) = 2.0;
        g(1, 1) = cdouble(0, 3);
        cmat h = cmat::Zero(3, 2);
        h(2, 0) = 1.0;                      // orthogonal to both columns
        h.col(1) = g.col(1) / g.col(1).norm(); // matched to beam 1
        const cmat c = effective_channels(unit_users(h), g);
        CHECK(c.row(0).norm() == 0.0);
        CHECK(std::abs(c(1, 1) - 3.0) < 1e-15);
    }
    SUBCASE("dimension mismatch")
    {
        CHECK_THROWS_AS(effective_channels(unit_users(cmat::Ones(3, 1)), cmat::Ones(4, 2)), ConfigError);
    }
}

TEST_CASE("user SINR")
{
    cvec one(1);
    one << cdouble(0.3, 0.4);
    CHECK(user_sinr(one, 0, 0.01) == doctest::Approx(0.25 / 0.01));

    cvec eq(4);
    eq << 1.0, cdouble(0, 1), -1.0, cdouble(0, -1);
    CHECK(user_sinr(eq, 2, 0.5) == doctest::Approx(1.0 / (3.0 + 0.5)));

    std::mt19937_64 e(2);
    const cmat r = oracle::random_complex(1, 4, e);
    std::vector<oracle::cd> row(r.data(), r.data() + 4);
    const cvec rv = r.row(0).transpose();
    for (int n = 0; n < 4; ++n)
        CHECK(user_sinr(rv, n, 0.1) == doctest::Approx(oracle::sinr(row, n, 0.1)).epsilon(1e-14));

    CHECK_THROWS_AS(user_sinr(rv, 0, 0.0), DomainError);
    CHECK_THROWS_AS(user_sinr(rv, 4, 0.1), IndexError);
}

TEST_CASE("scheduling matches the exhaustive oracle")
{
    std::mt19937_64 e(3);
    std::uniform_int_distribution<int> ud(1, 10), nd(1, 4);
    std::uniform_real_distribution<double> nud(-3, 1);
    for (int trial = 0; trial < 200; ++trial)
    {
        const int u = ud(e), n = nd(e);
        const cmat c = oracle::random_complex(u, n, e);
        const double nu = std::pow(10.0, nud(e));
        const SlotScheduleResult r = schedule_slot(c, nu, 5);
        const oracle::Assignment o = oracle::schedule_exhaustive(c, nu);
        CHECK(r.slot == 5);
        REQUIRE(r.beams.size() == static_cast<std::size_t>(n));
        std::set<int> seen;
        for (int b = 0; b < n; ++b)
        {
            CHECK(r.beams[b].user == o.user[b]);
            if (r.beams[b].user != kUnserved)
            {
                CHECK(seen.insert(r.beams[b].user).second);
                CHECK(r.beams[b].sinr == doctest::Approx(o.sinr[b]).epsilon(1e-14));
                CHECK(r.beams[b].rate == doctest::Approx(std::log2(1 + r.beams[b].sinr)));
            }
            else
                CHECK(r.beams[b].rate == 0.0);
        }
    }
}

TEST_CASE("scheduling special cases")
{
    SUBCASE("single user takes its best beam only")
    {
        cmat c(1, 2);
        c << 0.1, 1.0;
        const auto r = schedule_slot(c, 0.01);
        CHECK(r.beams[1].user == 0);
        CHECK(r.beams[0].user == kUnserved);
        CHECK(r.beams[0].rate == 0.0);
        CHECK(r.served_count() == 1);
    }
    SUBCASE("diagonal dominance")
    {
        cmat c = cmat::Constant(4, 4, 0.01);
        for (int i = 0; i < 4; ++i)
            c(i, i) = 10.0 + i;
        const auto r = schedule_slot(c, 0.1);
        for (int n = 0; n < 4; ++n)
            CHECK(r.beams[n].user == n);
    }
    SUBCASE("ties go to the smallest beam and user")
    {
        const cmat c = cmat::Ones(3, 2);
        const auto r = schedule_slot(c, 0.1);
        CHECK(r.beams[0].user == 0);
        CHECK(r.beams[1].user == kUnserved);
    }
    SUBCASE("lower noise raises every served SINR")
    {
        std::mt19937_64 e(4);
        const cmat c = oracle::random_complex(10, 4, e);
        const auto hi = schedule_slot(c, 1.0), lo = schedule_slot(c, 0.5);
        for (int n = 0; n < 4; ++n)
            if (hi.beams[n].user != kUnserved && lo.beams[n].user == hi.beams[n].user)
                CHECK(lo.beams[n].sinr > hi.beams[n].sinr);
        CHECK(lo.sum_rate() > hi.sum_rate());
    }
    SUBCASE("row scaling keeps every user's best beam")
    {
        std::mt19937_64 e(5);
        for (int t = 0; t < 20; ++t)
        {
            cmat c = oracle::random_complex(1, 4, e);
            int best0 = 0;
            for (int n = 0; n < 4; ++n)
                if (schedule_slot(c, 0.3).beams[n].user == 0)
                    best0 = n;
            c *= 7.5;
            int best1 = 0;
            for (int n = 0; n < 4; ++n)
                if (schedule_slot(c, 0.3).beams[n].user == 0)
                    best1 = n;
            CHECK(best0 == best1);
        }
    }
    CHECK_THROWS_AS(schedule_slot(cmat(0, 2), 0.1), ConfigError);
}

TEST_CASE("time-averaged sum rate")
{
    SlotScheduleResult empty;
    empty.beams.assign(2, BeamAssignment{});
    CHECK(ta_sum_rate({empty, empty}) == 0.0);

    SlotScheduleResult unit;
    unit.beams = {BeamAssignment{0, 1.0, std::log2(2.0)}};
    CHECK(ta_sum_rate({unit}) == doctest::Approx(1.0));

    SlotScheduleResult a, b;
    a.beams = {BeamAssignment{0, 0, 1.5}, BeamAssignment{1, 0, 2.0}};
    b.beams = {BeamAssignment{2, 0, 0.5}, BeamAssignment{}};
    CHECK(ta_sum_rate({a, b}) == doctest::Approx((3.5 + 0.5) / 2));
    CHECK_THROWS_AS(ta_sum_rate({}), ConfigError);

    const rmat r = per_user_rates({a, b}, 4);
    CHECK(r(1, 0) == 2.0);
    CHECK(r(2, 1) == 0.5);
    CHECK(r.col(1).sum() == 0.5);
    CHECK_THROWS_AS(per_user_rates({a}, 1), IndexError);
}

TEST_CASE("fairness index")
{
    rmat k = rmat::Zero(10, 1);
    k.topRows(3).setConstant(2.5);
    CHECK(fairness_index(k, FairnessVariant::PerSlot) == doctest::Approx(3.0));
    CHECK(fairness_index(k, FairnessVariant::CoherenceWindow) == doctest::Approx(3.0));
    CHECK(fairness_index(k, FairnessVariant::PerSlot, true) == doctest::Approx(0.3));

    rmat d = rmat::Zero(9, 2);
    for (int u = 1; u <= 4; ++u)
        d(u, 0) = 1.7;
    for (int u = 5; u <= 8; ++u)
        d(u, 1) = 1.7;
    CHECK(fairness_index(d, FairnessVariant::PerSlot) == doctest::Approx(4.0));
    CHECK(fairness_index(d, FairnessVariant::CoherenceWindow) == doctest::Approx(8.0));

    std::mt19937_64 e(6);
    std::uniform_real_distribution<double> ur(0, 3);
    rmat r(7, 3);
    for (int i = 0; i < r.size(); ++i)
        r.data()[i] = ur(e);
    double per_slot = 0;
    std::vector<double> mean(7, 0.0);
    for (int m = 0; m < 3; ++m)
    {
        std::vector<double> col;
        for (int u = 0; u < 7; ++u)
        {
            col.push_back(r(u, m));
            mean[u] += r(u, m) / 3;
        }
        per_slot += oracle::jain(col) / 3;
    }
    CHECK(fairness_index(r, FairnessVariant::PerSlot) == doctest::Approx(per_slot).epsilon(1e-13));
    CHECK(fairness_index(r, FairnessVariant::CoherenceWindow) == doctest::Approx(oracle::jain(mean)).epsilon(1e-13));

    CHECK(fairness_index(rmat::Zero(3, 2), FairnessVariant::CoherenceWindow) == 0.0);
    CHECK_THROWS_AS(fairness_index(-rmat::Ones(2, 2), FairnessVariant::PerSlot), DomainError);
    CHECK(fairness_variant_from_string("per-slot") == FairnessVariant::PerSlot);
    CHECK(fairness_variant_from_string(to_string(FairnessVariant::CoherenceWindow)) ==
          FairnessVariant::CoherenceWindow);
    CHECK_THROWS_AS(fairness_variant_from_string("jain"), ConfigError);
}

TEST_CASE("signalling overhead")
{
    const Overhead o = overhead(4, 2, 100, 9, 1.0);
    CHECK(o.train_partial == 8);
    CHECK(o.train_full == 9);
    CHECK(o.feed_partial == 200);
    CHECK(o.feed_full == 900);
    CHECK(o.slots_within_budget);
    CHECK_FALSE(overhead(4, 3, 100, 9, 1.0).slots_within_budget);
    CHECK(overhead(4, 2, 100, 9, 0.5).feed_partial == 100);
    CHECK_THROWS_AS(overhead(0, 2, 100, 9, 1.0), ConfigError);
    CHECK_THROWS_AS(overhead(4, 2, 100, 9, 0.0), ConfigError);
}

TEST_CASE("conventional MIMO baseline")
{
    SUBCASE("orthogonal unit channels see no interference")
    {
        const cmat h = cmat::Identity(4, 4);
        const auto out = baseline_mimo(unit_users(h), 4, 0.2, 2, 3.0);
        REQUIRE(out.size() == 2);
        for (const auto &b : out[0].beams)
        {
            CHECK(b.sinr == doctest::Approx((3.0 / 4) / 0.2)); // ||p_n||^2 / nu
        }
        CHECK(out[1].slot == 1);
    }
    SUBCASE("top-N selection by channel norm")
    {
        std::mt19937_64 e(7);
        for (int t = 0; t < 20; ++t)
        {
            const cmat h = oracle::random_complex(5, 6, e);
            const auto users = unit_users(h);
            std::vector<std::pair<double, int>> norms;
            for (int u = 0; u < 6; ++u)
                norms.push_back({-h.col(u).squaredNorm(), u});
            std::sort(norms.begin(), norms.end());
            const auto out = baseline_mimo(users, 2, 0.1, 1, 1.0);
            std::set<int> got{out[0].beams[0].user, out[0].beams[1].user};
            CHECK(got == std::set<int>{norms[0].second, norms[1].second});
        }
    }
    SUBCASE("precoder power and repeated users")
    {
        std::mt19937_64 e(8);
        const cmat h = oracle::random_complex(9, 20, e);
        auto users = unit_users(h);
        const auto out = baseline_mimo(users, 4, 0.05, 3, 1.0);
        for (int m = 1; m < 3; ++m)
            for (int n = 0; n < 4; ++n)
                CHECK(out[m].beams[n].user == out[0].beams[n].user);
        // equal rates per scheduled user: Jain over the window = N
        rmat eq = rmat::Zero(20, 3);
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 4; ++n)
                eq(out[m].beams[n].user, m) = 1.0;
        CHECK(fairness_index(eq, FairnessVariant::CoherenceWindow) == doctest::Approx(4.0));
    }
    CHECK_THROWS_AS(baseline_mimo(unit_users(cmat::Ones(3, 2)), 4, 0.1, 1, 1.0), ConfigError);
    CHECK_THROWS_AS(baseline_mimo(unit_users(cmat::Ones(3, 4)), 4, 0.1, 1, 0.0), ConfigError);
}
