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

#include <cmath>

namespace stsim
{
    GridSpec make_grid(int count_x, int count_y, double spacing, Alignment alignment)
    {
        if (count_x < 1 || count_y < 1)
            throw ConfigError("grid counts must be positive, got " + std::to_string(count_x) + "x" +
                              std::to_string(count_y));
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw ConfigError("grid spacing must be positive");

        GridSpec g;
        g.count_x = count_x;
        g.count_y = count_y;
        g.spacing = spacing;
        if (alignment == Alignment::Centered)
        {
            g.offset_x = -0.5 * (count_x - 1);
            g.offset_y = -0.5 * (count_y - 1);
        }
        return g;
    }

    GridSpec make_square_grid(int total, double spacing, Alignment alignment)
    {
        if (total < 1)
            throw ConfigError("grid total must be positive");
        int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(total))));
        if (side * side != total)
            throw ConfigError("element count " + std::to_string(total) + " is not a perfect square");
        return make_grid(side, side, spacing, alignment);
    }

    int linear_index(const GridSpec &grid, int ix, int iy)
    {
        if (ix < 0 || ix >= grid.count_x || iy < 0 || iy >= grid.count_y)
            throw IndexError("grid coordinate (" + std::to_string(ix) + "," + std::to_string(iy) +
                             ") outside " + std::to_string(grid.count_x) + "x" + std::to_string(grid.count_y));
        return ix * grid.count_y + iy;
    }

    std::pair<int, int> grid_coords(const GridSpec &grid, int index)
    {
        if (index < 0 || index >= grid.total())
            throw IndexError("linear index " + std::to_string(index) + " outside grid of " +
                             std::to_string(grid.total()));
        return {index / grid.count_y, index % grid.count_y};
    }

    double pair_distance(const GridSpec &grid_a, int idx_a, const GridSpec &grid_b, int idx_b, double separation)
    {
        if (grid_a.spacing != grid_b.spacing)
            throw ConfigError("pair_distance: grids have different spacings");
        if (!(separation > 0.0))
            throw ConfigError("pair_distance: separation must be positive");

        auto [ax, ay] = grid_coords(grid_a, idx_a);
        auto [bx, by] = grid_coords(grid_b, idx_b);
        double dx = (ax + grid_a.offset_x) - (bx + grid_b.offset_x);
        double dy = (ay + grid_a.offset_y) - (by + grid_b.offset_y);
        double d2 = grid_a.spacing * grid_a.spacing;
        return std::sqrt((dx * dx + dy * dy) * d2 + separation * separation);
    }
}
