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

#ifndef STSIM_ST_RANDOMIZER_HPP
#define STSIM_ST_RANDOMIZER_HPP

#include "stsim/common.hpp"

#include <cstdint>

namespace stsim
{
    // Per-slot phases of the space-time coded input layer: row m holds psi^(m).
    struct SlotPhases
    {
        rmat phases; // M x Z, radians in [0, 2pi)
        double beta = 1.0;
        std::uint64_t seed = 0;

        int slot_count() const { return static_cast<int>(phases.rows()); }
        int element_count() const { return static_cast<int>(phases.cols()); }

        // delta^(m) = beta * exp(j psi^(m))
        cvec coefficients(int slot) const;
    };

    // M x Z i.i.d. uniform phases; each slot row comes from its own sub-stream of `seed`.
    SlotPhases draw_slot_phases(int slot_count, int element_count, std::uint64_t seed, double beta = 1.0);
}

#endif
