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

#include "stsim/rng.hpp"
#include "stsim/target.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace stsim;

TEST_CASE("orthonormal-row draw maps to its scaled adjoint")
{
    std::mt19937_64 e(1);
    const cmat a = oracle::random_complex(6, 6, e);
    const cmat unitary = Eigen::HouseholderQR<cmat>(a).householderQ();
    const cmat r = unitary.topRows(3); // R R^H = I_3
    const double beta = 0.8, w1 = 2.5;
    const TargetMatrix t = target_from_draw(r, beta, w1);
    CHECK((t.entries - r.adjoint() / (beta * w1)).norm() < 1e-12);
}

TEST_CASE("columns orthogonal with the prescribed norm when Z <= V")
{
    for (auto [z, v] : {std::pair{9, 25}, {1, 4}, {5, 5}, {3, 7}})
        for (std::uint64_t seed = 0; seed < 10; ++seed)
        {
            const double beta = 0.9, w1 = 3.0;
            const TargetMatrix t = generate_target(z, v, beta, w1, seed);
            const double cns = 1.0 / (beta * beta * w1 * w1);
            CHECK(t.column_norm_sq == doctest::Approx(cns));
            CHECK(t.rank == z);
            const cmat gram = t.entries.adjoint() * t.entries;
            CHECK((gram - cns * cmat::Identity(z, z)).cwiseAbs().maxCoeff() < 1e-10 * cns);
            CHECK(t.total_power() == doctest::Approx(z * cns));
        }
}

TEST_CASE("row-orthogonal partial isometry when Z > V")
{
    const int z = 100, v = 9;
    const double cns = 1.0 / (1.0 * 7.0 * 7.0);
    const TargetMatrix t = generate_target(z, v, 1.0, 7.0, 3);
    CHECK(t.rank == v);
    const cmat rows = t.entries * t.entries.adjoint();
    const double row_norm = z * cns / v;
    CHECK((rows - row_norm * cmat::Identity(v, v)).cwiseAbs().maxCoeff() < 1e-10 * row_norm);
    CHECK(t.entries.squaredNorm() == doctest::Approx(z * cns).epsilon(1e-12));
}

TEST_CASE("scalar target")
{
    const double beta = 1.0, w1 = 4.0;
    const TargetMatrix t = generate_target(1, 1, beta, w1, 17);
    CHECK(std::abs(t.entries(0, 0)) == doctest::Approx(1.0 / (beta * w1)));
    // Reproduce the draw; the formula applies the conjugate transpose to it
    rng::Engine e(rng::derive(17, rng::kTarget));
    const cdouble r = rng::complex_normal(e, 1.0);
    CHECK(std::arg(t.entries(0, 0)) == doctest::Approx(std::arg(std::conj(r))));
}

TEST_CASE("determinism and seed sensitivity")
{
    const TargetMatrix a = generate_target(4, 6, 1.0, 1.0, 8);
    const TargetMatrix b = generate_target(4, 6, 1.0, 1.0, 8);
    CHECK((a.entries - b.entries).norm() == 0.0);
    CHECK(a.seed == 8);
    CHECK((a.entries - generate_target(4, 6, 1.0, 1.0, 9).entries).norm() > 0.0);
}

TEST_CASE("degenerate draws and bad arguments")
{
    cmat r(2, 3);
    r << 1, 2, 3, 2, 4, 6; // rank 1
    CHECK_THROWS_AS(target_from_draw(r, 1.0, 1.0), NumericError);
    CHECK_THROWS_AS(generate_target(0, 3, 1.0, 1.0, 0), ConfigError);
    CHECK_THROWS_AS(generate_target(2, 3, 0.0, 1.0, 0), ConfigError);
    CHECK_THROWS_AS(generate_target(2, 3, 1.0, -1.0, 0), ConfigError);
}
