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

#ifndef STSIM_TARGET_HPP
#define STSIM_TARGET_HPP

#include "stsim/common.hpp"

#include <cstdint>

namespace stsim
{
    struct TargetMatrix
    {
        cmat entries;              // V x Z
        double column_norm_sq = 0; // 1 / (beta^2 ||W_1||^2)
        int rank = 0;              // min(Z, V) for a non-degenerate draw
        std::uint64_t seed = 0;    // seed of the accepted draw

        // Sum of squared column norms the target is normalised to (Z * column_norm_sq)
        double total_power() const { return entries.cols() * column_norm_sq; }
    };

    // Target from a given Z x V draw R_a:
    //   G = c R_a^H (R_a R_a^H)^{+1/2}
    // with the pseudo-inverse square root taken over eigenvalues above
    // 1e-12 * max eigenvalue. For Z <= V this has orthogonal columns of squared
    // norm column_norm_sq. For Z > V it is a partial isometry with V orthogonal
    // rows, scaled so that ||G||_F^2 = Z * column_norm_sq.
    // Throws NumericError when the draw has rank below min(Z, V).
    TargetMatrix target_from_draw(const cmat &draw, double beta, double w1_frobenius);

    // Draws R_a with i.i.d. CN(0, 1) entries; a rank-deficient draw is retried
    // with seed + 1, up to three times.
    TargetMatrix generate_target(int z, int v, double beta, double w1_frobenius, std::uint64_t seed);
}

#endif
