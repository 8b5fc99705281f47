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

#include "stsim/target.hpp"
#include "stsim/rng.hpp"

#include <algorithm>

namespace stsim
{
    TargetMatrix target_from_draw(const cmat &draw, double beta, double w1_frobenius)
    {
        if (!(beta > 0.0) || !(w1_frobenius > 0.0))
            throw ConfigError("generate_target: beta and ||W_1|| must be positive");
        const int z = static_cast<int>(draw.rows());
        const int v = static_cast<int>(draw.cols());
        if (z < 1 || v < 1)
            throw ConfigError("generate_target: Z and V must be positive");

        const cmat gram = draw * draw.adjoint(); // Z x Z, Hermitian PSD
        Eigen::SelfAdjointEigenSolver<cmat> eig(gram);
        if (eig.info() != Eigen::Success)
            throw NumericError("generate_target: eigendecomposition failed");

        const rvec &lambda = eig.eigenvalues();
        const double floor = 1e-12 * lambda.maxCoeff();
        rvec inv_sqrt = rvec::Zero(z);
        int rank = 0;
        for (int i = 0; i < z; ++i)
            if (lambda(i) > floor && lambda(i) > 0.0)
            {
                inv_sqrt(i) = 1.0 / std::sqrt(lambda(i));
                ++rank;
            }
        if (rank < std::min(z, v))
            throw NumericError("generate_target: rank-deficient draw");

        const cmat &u = eig.eigenvectors();
        const cmat root = u * inv_sqrt.asDiagonal() * u.adjoint();

        TargetMatrix t;
        t.column_norm_sq = 1.0 / (beta * beta * w1_frobenius * w1_frobenius);
        t.rank = rank;
        // R^H (R R^H)^{+1/2} has `rank` unit singular values; spread Z * norm over them
        const double scale = std::sqrt(t.column_norm_sq * z / rank);
        t.entries = scale * (draw.adjoint() * root);
        return t;
    }

    TargetMatrix generate_target(int z, int v, double beta, double w1_frobenius, std::uint64_t seed)
    {
        if (z < 1 || v < 1)
            throw ConfigError("generate_target: Z and V must be positive");
        constexpr int kRetries = 3;
        for (int attempt = 0; attempt <= kRetries; ++attempt)
        {
            const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
            rng::Engine e(rng::derive(s, rng::kTarget));
            cmat draw(z, v);
            for (int c = 0; c < v; ++c)
                for (int r = 0; r < z; ++r)
                    draw(r, c) = rng::complex_normal(e, 1.0);
            try
            {
                TargetMatrix t = target_from_draw(draw, beta, w1_frobenius);
                t.seed = s;
                return t;
            }
            catch (const NumericError &)
            {
                if (attempt == kRetries)
                    throw;
            }
        }
        throw NumericError("generate_target: unreachable");
    }
}
