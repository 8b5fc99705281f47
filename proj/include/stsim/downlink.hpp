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

#ifndef STSIM_DOWNLINK_HPP
#define STSIM_DOWNLINK_HPP

#include "stsim/common.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace stsim
{
    struct DownlinkScenario
    {
        int user_count = 100;              // U
        double bs_height = 10.0;           // m
        double inner_radius = 10.0;        // m
        double outer_radius = 50.0;        // m
        double carrier_hz = 28.0e9;
        double bandwidth_hz = 10.0e6;
        double tx_power_dbm = 15.0;        // radiated power budget
        double noise_psd_dbm_hz = -174.0;
        double pathloss_exponent = 2.2;    // eta
        double reference_distance = 1.0;   // d0, m
        int slot_count = 2;                // M
        int streams = 4;                   // N

        double wavelength() const { return kSpeedOfLight / carrier_hz; }
        // sigma_w^2 / E with E / T_b = P_rad and T_b = 1 / bandwidth
        double noise_over_energy() const;
        double pathloss(double distance) const;

        std::vector<std::string> violations() const;
        void validate() const;
    };

    struct UserChannel
    {
        std::array<double, 3> position{};
        double distance = 0.0; // to the BS at (0, 0, bs_height)
        double pathloss = 0.0; // linear power gain
        cvec fading;           // h_u, length V
    };

    inline constexpr int kUnserved = -1;

    struct BeamAssignment
    {
        int user = kUnserved;
        double sinr = 0.0; // linear
        double rate = 0.0; // bit/s/Hz
    };

    struct SlotScheduleResult
    {
        int slot = 0;
        std::vector<BeamAssignment> beams; // one entry per steering vector n

        double sum_rate() const;
        int served_count() const;
    };

    // Users uniform by area over the annulus at z = 0 with i.i.d. CN(0, 1/V)
    // fading. Users are drawn sequentially from one stream, so the first k users
    // of a drop do not depend on user_count.
    std::vector<UserChannel> drop_users(const DownlinkScenario &scenario, int fading_length, std::uint64_t seed);

    // c_{u,n} = sqrt(rho_u) h_u^H g~_n, U x N
    cmat effective_channels(const std::vector<UserChannel> &users, const cmat &response);

    // |c_n|^2 / (sum_{j != n} |c_j|^2 + sigma^2 / E)
    double user_sinr(const cvec &c_row, int n, double noise_over_energy);

    // Partial-CSIT opportunistic scheduling: every user reports its best beam and
    // that SINR; each beam goes to its strongest reporter. Ties: smallest beam
    // index per user, smallest user index per beam.
    SlotScheduleResult schedule_slot(const cmat &effective, double noise_over_energy, int slot = 0);

    // (1/M) sum_m sum_n R_{u*_n}(m)
    double ta_sum_rate(const std::vector<SlotScheduleResult> &results);

    // U x M matrix of per-user rates, zero when unscheduled
    rmat per_user_rates(const std::vector<SlotScheduleResult> &results, int user_count);

    enum class FairnessVariant
    {
        PerSlot,
        CoherenceWindow
    };

    std::string to_string(FairnessVariant variant);
    FairnessVariant fairness_variant_from_string(const std::string &name);

    // Unnormalised Jain index (sum R)^2 / sum R^2; `normalized` divides by U.
    // PerSlot averages the index of every slot column, CoherenceWindow applies it
    // to the per-user mean rates. All-zero windows contribute 0.
    double fairness_index(const rmat &per_user_rates, FairnessVariant variant, bool normalized = false);

    struct Overhead
    {
        double train_partial = 0; // N M
        double train_full = 0;    // V
        double feed_partial = 0;  // eta U M
        double feed_full = 0;     // U V
        bool slots_within_budget = false; // M <= V / N
    };

    Overhead overhead(int n, int m, int u, int v, double eta_feedback);

    // Conventional full-CSI MIMO: serve the N users with the largest ||h_u||^2
    // using precoders h / ||h||^2, rescaled by one common factor so that the
    // precoder powers sum to `total_power` (in units of E). Identical for all
    // M slots.
    std::vector<SlotScheduleResult> baseline_mimo(const std::vector<UserChannel> &users, int n,
                                                  double noise_over_energy, int slot_count, double total_power);
}

#endif
