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

#ifndef STSIM_PROPAGATION_HPP
#define STSIM_PROPAGATION_HPP

#include "stsim/common.hpp"
#include "stsim/geometry.hpp"

namespace stsim
{
    struct KernelParams
    {
        double wavelength = 0.0;   // m
        double element_area = 0.0; // m^2, effective area of the transmitting element
        double separation = 0.0;   // m, distance between the two planes

        double wavenumber() const { return kTwoPi / wavelength; }
        void validate() const;
    };

    // Rayleigh-Sommerfeld element-to-element transmission
    //   K(d) = A s / (2 pi d^3) (1 - j k d) exp(j k d)
    cdouble rs_kernel(double d, const KernelParams &params);

    // dst.total() x src.total() matrix with entry (r, c) = K(distance(dst[r], src[c]))
    cmat build_propagation_matrix(const GridSpec &src, const GridSpec &dst, const KernelParams &params);
}

#endif
