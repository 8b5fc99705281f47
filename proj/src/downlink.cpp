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

#include "stsim/downlink.hpp"
#include "stsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stsim
{
    double DownlinkScenario::noise_over_energy() const
    {
        const double noise_dbm = noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz);
        return db_to_power(noise_dbm - tx_power_dbm);
    }

    double DownlinkScenario::pathloss(double distance) const
    {
        const double fs = wavelength() / (4.0 * kPi * reference_distance);
        return fs * fs * std::pow(reference_distance / distance, pathloss_exponent);
    }

    std::vector<std::string> DownlinkScenario::violations() const
    {
        std::vector<std::string> out;
        if (user_count < 1)
            out.push_back("user_count must be >= 1");
        if (!(inner_radius > 0.0) || !(inner_radius < outer_radius))
            out.push_back("annulus must satisfy 0 < inner_radius < outer_radius");
        if (!(bs_height >= 0.0))
            out.push_back("bs_height must be >= 0");
        if (!(carrier_hz > 0.0))
            out.push_back("carrier_hz must be positive");
        if (!(bandwidth_hz > 0.0))
            out.push_back("bandwidth_hz must be positive");
        if (!(pathloss_exponent > 0.0))
            out.push_back("pathloss_exponent must be positive");
        if (!(reference_distance > 0.0))
            out.push_back("reference_distance must be positive");
        if (slot_count < 1)
            out.push_back("slot_count must be >= 1");
        if (streams < 1)
            out.push_back("streams must be >= 1");
        if (!std::isfinite(tx_power_dbm) || !std::isfinite(noise_psd_dbm_hz))
            out.push_back("power levels must be finite");
        return out;
    }

    void DownlinkScenario::validate() const
    {
        auto v = violations();
        if (v.empty())
            return;
        std::string msg = "invalid downlink scenario:";
        for (const auto &s : v)
            msg += "\n  - " + s;
        throw ConfigError(msg);
    }

    double SlotScheduleResult::sum_rate() const
    {
        double s = 0.0;
        for (const auto &b : beams)
            s += b.rate;
        return s;
    }

    int SlotScheduleResult::served_count() const
    {
        return static_cast<int>(std::count_if(beams.begin(), beams.end(),
                                              [](const BeamAssignment &b) { return b.user != kUnserved; }));
    }

    std::vector<UserChannel> drop_users(const DownlinkScenario &scenario, int fading_length, std::uint64_t seed)
    {
        scenario.validate();
        if (fading_length < 1)
            throw ConfigError("drop_users: fading length must be positive");

        rng::Engine e(rng::derive(seed, rng::kUserDrops));
        const double ri2 = scenario.inner_radius * scenario.inner_radius;
        const double ro2 = scenario.outer_radius * scenario.outer_radius;
        const double variance = 1.0 / fading_length;

        std::vector<UserChannel> users(scenario.user_count);
        for (auto &u : users)
        {
            // inverse CDF of F(r) = (r^2 - ri^2) / (ro^2 - ri^2)
            const double r = std::sqrt(ri2 + rng::uniform01(e) * (ro2 - ri2));
            const double theta = kTwoPi * rng::uniform01(e);
            u.position = {r * std::cos(theta), r * std::sin(theta), 0.0};
            u.distance = std::hypot(r, scenario.bs_height);
            u.pathloss = scenario.pathloss(u.distance);
            u.fading.resize(fading_length);
            for (int v = 0; v < fading_length; ++v)
                u.fading(v) = rng::complex_normal(e, variance);
        }
        return users;
    }

    cmat effective_channels(const std::vector<UserChannel> &users, const cmat &response)
    {
        cmat c(static_cast<Eigen::Index>(users.size()), response.cols());
        for (std::size_t u = 0; u < users.size(); ++u)
        {
            if (users[u].fading.size() != response.rows())
                throw ConfigError("effective_channels: fading length differs from the response rows");
            c.row(static_cast<Eigen::Index>(u)) = std::sqrt(users[u].pathloss) * (users[u].fading.adjoint() * response);
        }
        return c;
    }

    double user_sinr(const cvec &c_row, int n, double noise_over_energy)
    {
        if (!(noise_over_energy > 0.0))
            throw DomainError("user_sinr: noise-to-energy ratio must be positive");
        if (n < 0 || n >= c_row.size())
            throw IndexError("user_sinr: beam index out of range");
        double interference = 0.0;
        for (Eigen::Index j = 0; j < c_row.size(); ++j)
            if (j != n)
                interference += std::norm(c_row(j));
        return std::norm(c_row(n)) / (interference + noise_over_energy);
    }

    SlotScheduleResult schedule_slot(const cmat &effective, double noise_over_energy, int slot)
    {
        const int users = static_cast<int>(effective.rows());
        const int beams = static_cast<int>(effective.cols());
        if (users < 1 || beams < 1)
            throw ConfigError("schedule_slot: need at least one user and one beam");

        SlotScheduleResult out;
        out.slot = slot;
        out.beams.assign(beams, BeamAssignment{});
        for (int u = 0; u < users; ++u)
        {
            const cvec row = effective.row(u).transpose();
            int best = 0;
            double best_sinr = user_sinr(row, 0, noise_over_energy);
            for (int n = 1; n < beams; ++n)
            {
                const double s = user_sinr(row, n, noise_over_energy);
                if (s > best_sinr)
                {
                    best = n;
                    best_sinr = s;
                }
            }
            auto &b = out.beams[best];
            if (b.user == kUnserved || best_sinr > b.sinr)
            {
                b.user = u;
                b.sinr = best_sinr;
            }
        }
        for (auto &b : out.beams)
            if (b.user != kUnserved)
                b.rate = std::log2(1.0 + b.sinr);
        return out;
    }

    double ta_sum_rate(const std::vector<SlotScheduleResult> &results)
    {
        if (results.empty())
            throw ConfigError("ta_sum_rate: need at least one slot");
        double s = 0.0;
        for (const auto &r : results)
            s += r.sum_rate();
        return s / static_cast<double>(results.size());
    }

    rmat per_user_rates(const std::vector<SlotScheduleResult> &results, int user_count)
    {
        rmat rates = rmat::Zero(user_count, static_cast<Eigen::Index>(results.size()));
        for (std::size_t m = 0; m < results.size(); ++m)
            for (const auto &b : results[m].beams)
                if (b.user != kUnserved)
                {
                    if (b.user >= user_count)
                        throw IndexError("per_user_rates: scheduled user outside the population");
                    rates(b.user, static_cast<Eigen::Index>(m)) += b.rate;
                }
        return rates;
    }

    std::string to_string(FairnessVariant variant)
    {
        return variant == FairnessVariant::PerSlot ? "per-slot" : "coherence";
    }

    FairnessVariant fairness_variant_from_string(const std::string &name)
    {
        if (name == "per-slot" || name == "per_slot")
            return FairnessVariant::PerSlot;
        if (name == "coherence" || name == "coherence_window")
            return FairnessVariant::CoherenceWindow;
        throw ConfigError("unknown fairness variant '" + name + "'");
    }

    static double jain(const rvec &rates)
    {
        const double sum_sq = rates.squaredNorm();
        if (sum_sq <= 0.0)
            return 0.0;
        const double sum = rates.sum();
        return sum * sum / sum_sq;
    }

    double fairness_index(const rmat &rates, FairnessVariant variant, bool normalized)
    {
        if (rates.rows() < 1 || rates.cols() < 1)
            throw ConfigError("fairness_index: empty rate matrix");
        if ((rates.array() < 0.0).any())
            throw DomainError("fairness_index: rates must be non-negative");

        double f = 0.0;
        if (variant == FairnessVariant::PerSlot)
        {
            for (Eigen::Index m = 0; m < rates.cols(); ++m)
                f += jain(rates.col(m));
            f /= static_cast<double>(rates.cols());
        }
        else
            f = jain(rates.rowwise().mean());
        return normalized ? f / static_cast<double>(rates.rows()) : f;
    }

    Overhead overhead(int n, int m, int u, int v, double eta_feedback)
    {
        if (n < 1 || m < 1 || u < 1 || v < 1)
            throw ConfigError("overhead: counts must be >= 1");
        if (!(eta_feedback > 0.0))
            throw ConfigError("overhead: feedback factor must be positive");
        Overhead o;
        o.train_partial = static_cast<double>(n) * m;
        o.train_full = v;
        o.feed_partial = eta_feedback * u * m;
        o.feed_full = static_cast<double>(u) * v;
        o.slots_within_budget = static_cast<long long>(m) * n <= v; // M <= V / N without rounding
        return o;
    }

    std::vector<SlotScheduleResult> baseline_mimo(const std::vector<UserChannel> &users, int n,
                                                  double noise_over_energy, int slot_count, double total_power)
    {
        const int u_count = static_cast<int>(users.size());
        if (n < 1 || u_count < n)
            throw ConfigError("baseline_mimo: need at least N users");
        if (slot_count < 1)
            throw ConfigError("baseline_mimo: slot count must be >= 1");
        if (!(total_power > 0.0))
            throw ConfigError("baseline_mimo: total power must be positive");

        std::vector<int> order(u_count);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return users[a].fading.squaredNorm() > users[b].fading.squaredNorm();
        });
        order.resize(n);

        const Eigen::Index v = users[order[0]].fading.size();
        cmat precoders(v, n);
        for (int k = 0; k < n; ++k)
        {
            const cvec &h = users[order[k]].fading;
            precoders.col(k) = h / h.squaredNorm();
        }
        precoders *= std::sqrt(total_power / precoders.squaredNorm());

        SlotScheduleResult slot;
        slot.beams.resize(n);
        for (int k = 0; k < n; ++k)
        {
            const auto &user = users[order[k]];
            const cvec row = (std::sqrt(user.pathloss) * (user.fading.adjoint() * precoders)).transpose();
            auto &b = slot.beams[k];
            b.user = order[k];
            b.sinr = user_sinr(row, k, noise_over_energy);
            b.rate = std::log2(1.0 + b.sinr);
        }

        std::vector<SlotScheduleResult> out(slot_count, slot);
        for (int m = 0; m < slot_count; ++m)
            out[m].slot = m;
        return out;
    }
}
