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

#include "stsim/pgd.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace stsim;

namespace
{
    StackConfig small_stack(int q_side, int num_ac, int num_pc, int q_y = 0)
    {
        StackConfig c;
        c.upa_x = c.upa_y = 1;
        c.st_dal_x = 2;
        c.st_dal_y = 1;
        c.layer_x = q_side;
        c.layer_y = q_y > 0 ? q_y : q_side;
        c.terminal_x = 2;
        c.terminal_y = 2;
        c.num_ac = num_ac;
        c.num_pc = num_pc;
        c.alignment = Alignment::Centered;
        return c;
    }

    void randomize(SimStack &s, std::mt19937_64 &e)
    {
        std::uniform_real_distribution<double> ph(0.0, kTwoPi);
        std::uniform_real_distribution<double> amp(0.3, 2.0);
        for (int l = 2; l <= s.layer_count(); ++l)
        {
            auto &c = s.mutable_coefficients(l);
            for (int i = 0; i < c.size(); ++i)
            {
                c.phases(i) = ph(e);
                if (is_amplitude_controlled(c.kind))
                    c.amplitudes(i) = amp(e);
            }
        }
        s.validate_coefficients();
    }

    TargetMatrix target_for(const SimStack &s, std::uint64_t seed)
    {
        return generate_target(s.z(), s.v(), 1.0, s.w1_frobenius(), seed);
    }

    // Central differences of the objective along one coefficient
    double fd(SimStack &s, const TargetMatrix &t, int layer, int i, bool phase, double h = 1e-6)
    {
        auto &c = s.mutable_coefficients(layer);
        double &x = phase ? c.phases(i) : c.amplitudes(i);
        const double x0 = x;
        x = x0 + h;
        const double fp = objective(s, t);
        x = x0 - h;
        const double fm = objective(s, t);
        x = x0;
        return (fp - fm) / (2 * h);
    }
}

TEST_CASE("objective")
{
    SimStack s(small_stack(2, 1, 2));
    const TargetMatrix t = target_for(s, 1);
    CHECK(objective(t.entries, t.entries) == 0.0);
    CHECK(objective(cmat::Zero(4, 2), t.entries) == doctest::Approx(2 * t.column_norm_sq));
    std::mt19937_64 e(2);
    const cmat a = oracle::random_complex(2, 2, e), b = oracle::random_complex(2, 2, e);
    double sum = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            sum += std::norm(a(i, j) - b(i, j));
    CHECK(objective(a, b) == doctest::Approx(sum).epsilon(1e-14));
    CHECK_THROWS_AS(objective(cmat::Zero(3, 2), t.entries), ConfigError);
    CHECK(normalized_objective_db(t.entries.squaredNorm() / 100, t) == doctest::Approx(-20.0));
}

TEST_CASE("layer factors reproduce the composed block")
{
    std::mt19937_64 e(4);
    SimStack s(small_stack(2, 2, 2));
    randomize(s, e);
    const cmat g0 = s.compose_space_block();
    const int last = s.layer_count();
    CHECK((layer_factors(s, last).downstream - cmat::Identity(s.v(), s.v())).norm() == 0.0);
    CHECK((layer_factors(s, 2).upstream - s.propagation(2)).norm() == 0.0);
    for (int l = 2; l <= last; ++l)
    {
        const auto f = layer_factors(s, l);
        const cvec gamma = s.coefficients(l).gamma();
        for (int z = 0; z < s.z(); ++z)
        {
            const cvec col = f.downstream * f.upstream.col(z).asDiagonal() * gamma;
            CHECK((col - g0.col(z)).norm() < 1e-12 * g0.norm());
        }
    }
    CHECK_THROWS_AS(layer_factors(s, 1), IndexError);
    CHECK_THROWS_AS(layer_factors(s, last + 1), IndexError);
}

TEST_CASE("Hadamard quadratic form equals the sum over columns")
{
    std::mt19937_64 e(5);
    for (int trial = 0; trial < 5; ++trial)
    {
        SimStack s(small_stack(2, 1, 2));
        randomize(s, e);
        const TargetMatrix t = target_for(s, trial);
        for (int l = 2; l <= s.layer_count(); ++l)
        {
            const auto f = layer_factors(s, l);
            const auto aux = auxiliary_terms(s, t, l);
            const cmat ehe = f.downstream.adjoint() * f.downstream;
            cmat a = cmat::Zero(ehe.rows(), ehe.cols());
            cvec v = cvec::Zero(ehe.rows());
            for (int z = 0; z < s.z(); ++z)
            {
                const cvec b = f.upstream.col(z);
                a += b.conjugate().asDiagonal() * ehe * b.asDiagonal();
                v += b.conjugate().asDiagonal() * (f.downstream.adjoint() * t.entries.col(z));
            }
            CHECK((aux.a - a).norm() < 1e-12 * a.norm());
            CHECK((aux.v - v).norm() < 1e-12 * v.norm());
        }
    }
}

TEST_CASE("analytic gradients match central finite differences")
{
    std::mt19937_64 e(6);
    std::uniform_int_distribution<int> qy(2, 4), ac(1, 2), pc(1, 2);
    for (int trial = 0; trial < 10; ++trial)
    {
        SimStack s(small_stack(2, ac(e), pc(e), qy(e))); // Q in {4, 6, 8}
        randomize(s, e);
        const TargetMatrix t = target_for(s, 100 + trial);
        for (int l = 2; l <= s.layer_count(); ++l)
        {
            const bool phase = is_phase_controlled(s.kind(l));
            const rvec g = gradient(s, t, l, phase ? GradientKind::Phase : GradientKind::Amplitude);
            for (int i = 0; i < g.size(); ++i)
            {
                const double ref = fd(s, t, l, i, phase);
                CHECK(std::abs(g(i) - ref) <= 1e-5 * std::max(std::abs(ref), 1e-3 * t.entries.squaredNorm()));
            }
            CHECK_THROWS_AS(gradient(s, t, l, phase ? GradientKind::Amplitude : GradientKind::Phase), UsageError);
        }
    }
}

TEST_CASE("gradient vanishes at an exactly reachable target")
{
    std::mt19937_64 e(7);
    SimStack s(small_stack(2, 1, 2));
    randomize(s, e);
    TargetMatrix t;
    t.entries = s.compose_space_block();
    for (int l = 2; l <= s.layer_count(); ++l)
    {
        const bool phase = is_phase_controlled(s.kind(l));
        CHECK(gradient(s, t, l, phase ? GradientKind::Phase : GradientKind::Amplitude).norm() < 1e-14);
    }
}

TEST_CASE("amplitude projection")
{
    const double lo = db_to_amplitude(-22), hi = db_to_amplitude(13);
    rvec a(3);
    a << 1.0, 10.0, 0.0;
    const rvec p = project_amplitude(a, lo, hi);
    CHECK(p(0) == 1.0);
    CHECK(p(1) == doctest::Approx(4.467).epsilon(0.001 / 4.467));
    CHECK(p(2) == doctest::Approx(0.0794).epsilon(0.0001 / 0.0794));
}

TEST_CASE("PGD descends monotonically and stays feasible")
{
    StackConfig c = small_stack(3, 2, 3);
    c.st_dal_x = c.st_dal_y = 2;
    c.terminal_x = c.terminal_y = 3;
    for (std::uint64_t seed = 0; seed < 4; ++seed)
    {
        SimStack s(c);
        const TargetMatrix t = target_for(s, seed);
        PgdConfig cfg;
        cfg.seed = seed;
        cfg.max_iterations = 100;
        cfg.initial_step = 10.0;
        int calls = 0;
        cfg.observer = [&](int iter, const SimStack &st, double f) {
            ++calls;
            CHECK(iter == calls);
            CHECK(f == doctest::Approx(objective(st, t)).epsilon(1e-12));
            for (int l = 2; l <= st.layer_count(); ++l)
            {
                const auto &k = st.coefficients(l);
                if (is_amplitude_controlled(k.kind))
                {
                    CHECK(k.amplitudes.minCoeff() >= cfg.alpha_min);
                    CHECK(k.amplitudes.maxCoeff() <= cfg.alpha_max);
                }
                else
                    CHECK(k.amplitudes.isApproxToConstant(c.alpha_pc, 0.0));
                CHECK(k.phases.allFinite());
            }
        };
        const PgdState st = run_pgd(s, t, cfg);
        CHECK(calls == st.iteration);
        CHECK(st.objective_trace.size() == static_cast<std::size_t>(st.iteration + 1));
        CHECK(st.step_trace.size() == static_cast<std::size_t>(st.iteration));
        for (std::size_t k = 1; k < st.objective_trace.size(); ++k)
            CHECK(st.objective_trace[k] <= st.objective_trace[k - 1]);
        CHECK(st.final_objective() < st.initial_objective());
        // coefficients written back
        CHECK(objective(s, t) == doctest::Approx(st.final_objective()).epsilon(1e-12));
        CHECK((s.coefficients(2).amplitudes - st.amplitudes[0]).norm() == 0.0);
    }
}

TEST_CASE("PGD reaches an exactly reachable target")
{
    StackConfig c = small_stack(2, 0, 2);
    c.st_dal_x = 1;
    c.terminal_x = 1;
    c.terminal_y = 1; // Z = V = 1
    SimStack s(c);
    std::mt19937_64 e(8);
    randomize(s, e);
    TargetMatrix t;
    t.entries = s.compose_space_block();
    PgdConfig cfg;
    cfg.seed = 3;
    cfg.max_iterations = 2000;
    cfg.relative_tolerance = 0.0;
    const PgdState st = run_pgd(s, t, cfg);
    CHECK(st.final_objective() < 1e-12 * st.initial_objective());
}

TEST_CASE("PGD is deterministic for a seed")
{
    auto run = [](std::uint64_t seed) {
        StackConfig c = small_stack(2, 1, 2);
        SimStack s(c);
        PgdConfig cfg;
        cfg.seed = seed;
        cfg.max_iterations = 30;
        return run_pgd(s, generate_target(s.z(), s.v(), 1.0, s.w1_frobenius(), 1), cfg).objective_trace;
    };
    CHECK(run(4) == run(4));
    CHECK(run(4) != run(5));
}

TEST_CASE("PGD configuration errors")
{
    SimStack s(small_stack(2, 1, 2));
    const TargetMatrix t = target_for(s, 0);
    PgdConfig cfg;
    cfg.max_iterations = 0;
    cfg.backtracking_contraction = 1.5;
    CHECK(cfg.violations().size() == 2);
    CHECK_THROWS_AS(run_pgd(s, t, cfg), ConfigError);
    PgdConfig wide;
    wide.alpha_max = 100.0;
    CHECK_THROWS_AS(run_pgd(s, t, wide), ConfigError);
    TargetMatrix wrong;
    wrong.entries = cmat::Zero(1, 1);
    CHECK_THROWS_AS(run_pgd(s, wrong, PgdConfig{}), ConfigError);
}

TEST_CASE("frozen layers are logged, not fatal")
{
    SimStack s(small_stack(2, 1, 2));
    const TargetMatrix t = target_for(s, 0);
    PgdConfig cfg;
    cfg.initial_step = 1e12; // huge steps never satisfy Armijo within a handful of halvings
    cfg.max_backtracks = 2;
    cfg.max_iterations = 3;
    std::ostringstream log;
    cfg.log = &log;
    const PgdState st = run_pgd(s, t, cfg);
    CHECK(st.frozen_updates > 0);
    CHECK(log.str().find("frozen") != std::string::npos);
    CHECK(st.final_objective() <= st.initial_objective());
}
