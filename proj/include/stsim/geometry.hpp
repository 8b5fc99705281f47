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

#ifndef STSIM_GEOMETRY_HPP
#define STSIM_GEOMETRY_HPP

#include "stsim/common.hpp"

#include <utility>

namespace stsim
{
    // How smaller boundary grids sit inside the Q-grid.
    //   IndexAligned: element (0,0) of every grid coincides (default)
    //   Centered:     grid centres coincide
    enum class Alignment
    {
        IndexAligned,
        Centered
    };

    // Rectangular element grid. Element (ix, iy) sits at
    // ((ix + offset_x) * spacing, (iy + offset_y) * spacing).
    struct GridSpec
    {
        int count_x = 1;
        int count_y = 1;
        double spacing = 1.0; // m
        double offset_x = 0.0; // in units of spacing
        double offset_y = 0.0;

        int total() const { return count_x * count_y; }
    };

    // Validated constructor; throws ConfigError on non-positive counts or spacing.
    GridSpec make_grid(int count_x, int count_y, double spacing, Alignment alignment = Alignment::IndexAligned);

    // Square grid with side round(sqrt(total)); throws ConfigError if total is not a perfect square.
    GridSpec make_square_grid(int total, double spacing, Alignment alignment = Alignment::IndexAligned);

    int linear_index(const GridSpec &grid, int ix, int iy);
    std::pair<int, int> grid_coords(const GridSpec &grid, int index);

    // Distance between element idx_a of grid_a and element idx_b of grid_b on
    // parallel planes `separation` apart. Both grids must share the spacing.
    double pair_distance(const GridSpec &grid_a, int idx_a, const GridSpec &grid_b, int idx_b, double separation);
}

#endif
