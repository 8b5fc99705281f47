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

#include "stsim/propagation.hpp"

#include <cmath>

namespace stsim
{
    void KernelParams::validate() const
    {
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw ConfigError("kernel wavelength must be positive");
        if (!(element_area > 0.0) || !std::isfinite(element_area))
            throw ConfigError("kernel element area must be positive");
        if (!(separation > 0.0) || !std::isfinite(separation))
            throw ConfigError("kernel separation must be positive");
    }

    cdouble rs_kernel(double d, const KernelParams &params)
    {
        if (!(d > 0.0))
            throw DomainError("rs_kernel: propagation distance must be positive");
        const double k = params.wavenumber();
        const double scale = params.element_area * params.separation / (kTwoPi * d * d * d);
        const double kd = k * d;
        // (1 - j kd) e^{j kd}
        const cdouble phasor(std::cos(kd), std::sin(kd));
        return scale * cdouble(1.0, -kd) * phasor;
    }

    cmat build_propagation_matrix(const GridSpec &src, const GridSpec &dst, const KernelParams &params)
    {
        params.validate();
        cmat w(dst.total(), src.total());
        for (int c = 0; c < src.total(); ++c)
            for (int r = 0; r < dst.total(); ++r)
                w(r, c) = rs_kernel(pair_distance(dst, r, src, c, params.separation), params);
        return w;
    }
}
