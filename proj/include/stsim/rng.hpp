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

#ifndef STSIM_RNG_HPP
#define STSIM_RNG_HPP

#include "stsim/common.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace stsim::rng
{
    using Engine = std::mt19937_64;

    // Named sub-streams of one master seed
    inline constexpr std::string_view kTarget = "target";
    inline constexpr std::string_view kPgdInit = "pgd-init";
    inline constexpr std::string_view kStPhases = "st-phases";
    inline constexpr std::string_view kChannels = "channels";
    inline constexpr std::string_view kUserDrops = "user-drops";
    inline constexpr std::string_view kAcPhases = "ac-phases";

    inline constexpr std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    inline constexpr std::uint64_t fnv1a(std::string_view s)
    {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (char c : s)
        {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    // Stable, order-independent seed derivation: master ⊕ (stream, a, b)
    inline constexpr std::uint64_t derive(std::uint64_t master, std::string_view stream,
                                          std::uint64_t a = 0, std::uint64_t b = 0)
    {
        std::uint64_t h = splitmix64(master);
        h = splitmix64(h ^ fnv1a(stream));
        h = splitmix64(h ^ splitmix64(a + 0x632BE59BD9B4E019ULL));
        h = splitmix64(h ^ splitmix64(b + 0x85157AF5ULL));
        return h;
    }

    // Uniform on [0, 1) with 53 random bits; identical on every platform.
    inline double uniform01(Engine &e) { return static_cast<double>(e() >> 11) * 0x1.0p-53; }

    // Zero-mean circularly symmetric complex Gaussian with E|x|^2 = variance
    inline cdouble complex_normal(Engine &e, double variance = 1.0)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
        double re = n(e);
        double im = n(e);
        return {re, im};
    }
}

#endif
