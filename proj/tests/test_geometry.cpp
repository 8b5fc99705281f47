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

#include "stsim/geometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace stsim;

TEST_CASE("linear index of a 2x2 grid")
{
    const GridSpec g = make_grid(2, 2, 0.1);
    CHECK(linear_index(g, 0, 0) == 0);
    CHECK(linear_index(g, 1, 0) == 2);
    CHECK(linear_index(g, 1, 1) == 3);
    CHECK_THROWS_AS(linear_index(g, 2, 0), IndexError);
    CHECK_THROWS_AS(linear_index(g, 0, -1), IndexError);
}

TEST_CASE("linear index round trip is the identity")
{
    for (auto [nx, ny] : {std::pair{1, 1}, {3, 5}, {8, 8}, {7, 2}})
    {
        const GridSpec g = make_grid(nx, ny, 1.0);
        for (int i = 0; i < g.total(); ++i)
        {
            auto [ix, iy] = grid_coords(g, i);
            CHECK(linear_index(g, ix, iy) == i);
        }
    }
    CHECK_THROWS_AS(grid_coords(make_grid(2, 2, 1.0), 4), IndexError);
}

TEST_CASE("pair distance")
{
    const double d = 0.3, s = 0.7;
    const GridSpec a = make_grid(3, 3, d);
    const GridSpec b = make_grid(4, 4, d);

    SUBCASE("collocated elements are one separation apart")
    {
        CHECK(pair_distance(a, linear_index(a, 1, 2), b, linear_index(b, 1, 2), s) == doctest::Approx(s));
    }
    SUBCASE("unit x offset")
    {
        CHECK(pair_distance(a, linear_index(a, 0, 0), b, linear_index(b, 1, 0), s) ==
              doctest::Approx(std::sqrt(d * d + s * s)));
    }
    SUBCASE("symmetric, bounded below by the separation")
    {
        for (int i = 0; i < a.total(); ++i)
            for (int j = 0; j < b.total(); ++j)
            {
                const double ab = pair_distance(a, i, b, j, s);
                CHECK(ab == pair_distance(b, j, a, i, s));
                CHECK(ab >= s);
                auto [ax, ay] = grid_coords(a, i);
                auto [bx, by] = grid_coords(b, j);
                if (ax == bx && ay == by)
                    CHECK(ab == doctest::Approx(s));
                else
                    CHECK(ab > s);
            }
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(pair_distance(a, 0, make_grid(3, 3, 2 * d), 0, s), ConfigError);
        CHECK_THROWS_AS(pair_distance(a, 0, b, 0, 0.0), ConfigError);
        CHECK_THROWS_AS(pair_distance(a, 9, b, 0, s), IndexError);
    }
}

TEST_CASE("centred alignment puts grid centres on the axis")
{
    const double d = 1.0, s = 0.5;
    const GridSpec small = make_grid(3, 3, d, Alignment::Centered);
    const GridSpec big = make_grid(5, 5, d, Alignment::Centered);
    // middle of the 3x3 sits over the middle of the 5x5
    CHECK(pair_distance(small, linear_index(small, 1, 1), big, linear_index(big, 2, 2), s) == doctest::Approx(s));
    // index alignment puts (0,0) over (0,0) instead
    const GridSpec small_i = make_grid(3, 3, d);
    const GridSpec big_i = make_grid(5, 5, d);
    CHECK(pair_distance(small_i, 0, big_i, 0, s) == doctest::Approx(s));
}

TEST_CASE("grid construction")
{
    CHECK_THROWS_AS(make_grid(0, 2, 1.0), ConfigError);
    CHECK_THROWS_AS(make_grid(2, 2, 0.0), ConfigError);
    CHECK(make_square_grid(49, 1.0).count_x == 7);
    CHECK_THROWS_AS(make_square_grid(50, 1.0), ConfigError);
}
