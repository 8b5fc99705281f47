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

#include "stsim/st_randomizer.hpp"
#include "stsim/rng.hpp"

namespace stsim
{
    cvec SlotPhases::coefficients(int slot) const
    {
        if (slot < 0 || slot >= slot_count())
            throw IndexError("slot " + std::to_string(slot) + " outside [0, " + std::to_string(slot_count()) + ")");
        cvec delta(element_count());
        for (int z = 0; z < element_count(); ++z)
            delta(z) = std::polar(beta, phases(slot, z));
        return delta;
    }

    SlotPhases draw_slot_phases(int slot_count, int element_count, std::uint64_t seed, double beta)
    {
        if (slot_count < 1 || element_count < 1)
            throw ConfigError("draw_slot_phases: slot and element counts must be positive");
        if (!(beta > 0.0) || beta > 1.0)
            throw ConfigError("draw_slot_phases: beta must lie in (0, 1]");

        SlotPhases out;
        out.beta = beta;
        out.seed = seed;
        out.phases.resize(slot_count, element_count);
        for (int m = 0; m < slot_count; ++m)
        {
            rng::Engine e(rng::derive(seed, rng::kStPhases, static_cast<std::uint64_t>(m)));
            for (int z = 0; z < element_count; ++z)
            {
                double psi = kTwoPi * rng::uniform01(e);
                out.phases(m, z) = psi < kTwoPi ? psi : 0.0; // rounding can land on 2pi
            }
        }
        return out;
    }
}
