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

#include "stsim/sim_stack.hpp"
#include "stsim/rng.hpp"

#include <cmath>

namespace stsim
{
    std::string to_string(LayerKind kind)
    {
        switch (kind)
        {
        case LayerKind::StDal:
            return "st_dal";
        case LayerKind::PhaseControlled:
            return "pc";
        case LayerKind::AmplitudeControlled:
            return "ac";
        case LayerKind::TerminalDalPc:
            return "terminal_pc";
        case LayerKind::TerminalDalAc:
            return "terminal_ac";
        }
        return "unknown";
    }

    LayerKind layer_kind_from_string(const std::string &name)
    {
        if (name == "st_dal")
            return LayerKind::StDal;
        if (name == "pc")
            return LayerKind::PhaseControlled;
        if (name == "ac")
            return LayerKind::AmplitudeControlled;
        if (name == "terminal_pc")
            return LayerKind::TerminalDalPc;
        if (name == "terminal_ac")
            return LayerKind::TerminalDalAc;
        throw ConfigError("unknown layer kind '" + name + "'");
    }

    bool is_phase_controlled(LayerKind kind)
    {
        return kind == LayerKind::PhaseControlled || kind == LayerKind::TerminalDalPc;
    }

    bool is_amplitude_controlled(LayerKind kind)
    {
        return kind == LayerKind::AmplitudeControlled || kind == LayerKind::TerminalDalAc;
    }

    static bool is_terminal(LayerKind kind)
    {
        return kind == LayerKind::TerminalDalPc || kind == LayerKind::TerminalDalAc;
    }

    cvec LayerCoefficients::gamma() const
    {
        cvec g(size());
        for (int i = 0; i < size(); ++i)
            g(i) = std::polar(amplitudes(i), phases(i));
        return g;
    }

    // ---------------------------------------------------------------- StackConfig

    std::vector<LayerKind> StackConfig::resolved_kinds() const
    {
        if (!layer_kinds.empty())
            return layer_kinds;

        std::vector<LayerKind> kinds;
        const bool terminal_ac = terminal_kind == LayerKind::TerminalDalAc;
        const int ac = std::max(0, terminal_ac ? num_ac - 1 : num_ac);
        const int pc = std::max(0, terminal_ac ? num_pc : num_pc - 1);
        kinds.insert(kinds.end(), ac, LayerKind::AmplitudeControlled);
        kinds.insert(kinds.end(), pc, LayerKind::PhaseControlled);
        kinds.push_back(terminal_kind);
        return kinds;
    }

    std::vector<std::string> StackConfig::violations() const
    {
        std::vector<std::string> out;
        auto positive = [&](int value, const char *name) {
            if (value < 1)
                out.push_back(std::string(name) + " must be >= 1");
        };
        positive(upa_x, "upa_x");
        positive(upa_y, "upa_y");
        positive(st_dal_x, "st_dal_x");
        positive(st_dal_y, "st_dal_y");
        positive(layer_x, "layer_x");
        positive(layer_y, "layer_y");
        positive(terminal_x, "terminal_x");
        positive(terminal_y, "terminal_y");

        if (!(carrier_hz > 0.0))
            out.push_back("carrier_hz must be positive");
        if (!(spacing_wavelengths > 0.0))
            out.push_back("spacing_wavelengths must be positive");
        if (!(layer_separation_wavelengths > 0.0))
            out.push_back("layer_separation_wavelengths must be positive");
        if (!(bs_separation_wavelengths > 0.0))
            out.push_back("bs_separation_wavelengths must be positive");
        if (element_area_bs && !(*element_area_bs > 0.0))
            out.push_back("element_area_bs must be positive");
        if (element_area_meta && !(*element_area_meta > 0.0))
            out.push_back("element_area_meta must be positive");

        if (!(alpha_pc > 0.0) || alpha_pc > 1.0)
            out.push_back("alpha_pc must lie in (0, 1]");
        if (!(beta > 0.0) || beta > 1.0)
            out.push_back("beta must lie in (0, 1]");
        if (!(alpha_min_db <= alpha_max_db))
            out.push_back("alpha_min_db must not exceed alpha_max_db");

        if (z() > q() && layer_count() > 2)
            out.push_back("st_dal elements (Z) must not exceed layer elements (Q)");
        if (v() > q() && layer_count() > 2)
            out.push_back("terminal elements (V) must not exceed layer elements (Q)");

        if (layer_kinds.empty())
        {
            if (num_ac < 0)
                out.push_back("num_ac must be >= 0");
            if (num_pc < 0)
                out.push_back("num_pc must be >= 0");
            if (terminal_kind == LayerKind::TerminalDalPc && num_pc < 1)
                out.push_back("num_pc must be >= 1 when the terminal DAL is phase controlled");
            if (terminal_kind == LayerKind::TerminalDalAc && num_ac < 1)
                out.push_back("num_ac must be >= 1 when the terminal DAL is amplitude controlled");
            if (!is_terminal(terminal_kind))
                out.push_back("terminal_kind must be terminal_pc or terminal_ac");
        }
        else
        {
            for (std::size_t i = 0; i + 1 < layer_kinds.size(); ++i)
                if (layer_kinds[i] != LayerKind::PhaseControlled && layer_kinds[i] != LayerKind::AmplitudeControlled)
                    out.push_back("layer_kinds[" + std::to_string(i) + "] must be pc or ac");
            if (!is_terminal(layer_kinds.back()))
                out.push_back("last entry of layer_kinds must be terminal_pc or terminal_ac");
        }
        return out;
    }

    void StackConfig::validate() const
    {
        auto v = violations();
        if (v.empty())
            return;
        std::string msg = "invalid stack config:";
        for (const auto &s : v)
            msg += "\n  - " + s;
        throw ConfigError(msg);
    }

    // ---------------------------------------------------------------- SimStack

    SimStack::SimStack(StackConfig config) : config_(std::move(config))
    {
        config_.validate();
        const auto kinds = config_.resolved_kinds();
        kinds_ = kinds;
        layer_count_ = 1 + static_cast<int>(kinds.size());

        const double d = config_.spacing();
        const double lambda = config_.wavelength();
        upa_ = make_grid(config_.upa_x, config_.upa_y, d, config_.alignment);

        grids_.push_back(make_grid(config_.st_dal_x, config_.st_dal_y, d, config_.alignment));
        for (int l = 2; l < layer_count_; ++l)
            grids_.push_back(make_grid(config_.layer_x, config_.layer_y, d, config_.alignment));
        grids_.push_back(make_grid(config_.terminal_x, config_.terminal_y, d, config_.alignment));

        KernelParams bs{lambda, config_.element_area_bs.value_or(d * d), config_.bs_separation_wavelengths * lambda};
        KernelParams meta{lambda, config_.element_area_meta.value_or(d * d),
                          config_.layer_separation_wavelengths * lambda};

        propagation_.push_back(std::make_shared<const cmat>(build_propagation_matrix(upa_, grids_[0], bs)));
        std::shared_ptr<const cmat> inner; // Q x Q matrix shared by W_3..W_{L-1}
        for (int l = 2; l <= layer_count_; ++l)
        {
            const bool q_to_q = l >= 3 && l <= layer_count_ - 1;
            if (q_to_q && inner)
            {
                propagation_.push_back(inner);
                continue;
            }
            auto w = std::make_shared<const cmat>(build_propagation_matrix(grids_[l - 2], grids_[l - 1], meta));
            if (q_to_q)
                inner = w;
            propagation_.push_back(std::move(w));
        }

        for (int l = 2; l <= layer_count_; ++l)
        {
            LayerCoefficients c;
            c.kind = kinds[l - 2];
            const int size = grids_[l - 1].total();
            c.phases = rvec::Zero(size);
            if (is_phase_controlled(c.kind))
                c.amplitudes = rvec::Constant(size, config_.alpha_pc);
            else
            {
                c.amplitudes = rvec::Ones(size).cwiseMax(config_.alpha_min()).cwiseMin(config_.alpha_max());
                if (config_.ac_phase_seed)
                {
                    rng::Engine e(rng::derive(*config_.ac_phase_seed, rng::kAcPhases, static_cast<std::uint64_t>(l)));
                    for (int i = 0; i < size; ++i)
                        c.phases(i) = kTwoPi * rng::uniform01(e);
                }
            }
            coefficients_.push_back(std::move(c));
        }

        slot_phases_.beta = config_.beta;
        slot_phases_.phases = rmat::Zero(1, z());
    }

    void SimStack::check_layer(int layer, int lowest) const
    {
        if (layer < lowest || layer > layer_count_)
            throw IndexError("layer " + std::to_string(layer) + " outside [" + std::to_string(lowest) + ", " +
                             std::to_string(layer_count_) + "]");
    }

    const GridSpec &SimStack::grid(int layer) const
    {
        check_layer(layer, 1);
        return grids_[layer - 1];
    }

    const cmat &SimStack::propagation(int layer) const
    {
        check_layer(layer, 1);
        return *propagation_[layer - 1];
    }

    LayerKind SimStack::kind(int layer) const
    {
        check_layer(layer, 1);
        return layer == 1 ? LayerKind::StDal : kinds_[layer - 2];
    }

    const LayerCoefficients &SimStack::coefficients(int layer) const
    {
        check_layer(layer, 2);
        return coefficients_[layer - 2];
    }

    LayerCoefficients &SimStack::mutable_coefficients(int layer)
    {
        check_layer(layer, 2);
        return coefficients_[layer - 2];
    }

    void SimStack::set_coefficients(int layer, LayerCoefficients coefficients)
    {
        check_layer(layer, 2);
        auto previous = std::move(coefficients_[layer - 2]);
        coefficients_[layer - 2] = std::move(coefficients);
        try
        {
            validate_coefficients();
        }
        catch (...)
        {
            coefficients_[layer - 2] = std::move(previous);
            throw;
        }
    }

    void SimStack::validate_coefficients() const
    {
        const double lo = config_.alpha_min() * (1.0 - 1e-12);
        const double hi = config_.alpha_max() * (1.0 + 1e-12);
        for (int l = 2; l <= layer_count_; ++l)
        {
            const auto &c = coefficients_[l - 2];
            const std::string where = "layer " + std::to_string(l) + " (" + to_string(c.kind) + ")";
            if (c.amplitudes.size() != grids_[l - 1].total() || c.phases.size() != grids_[l - 1].total())
                throw ConfigError(where + ": coefficient length does not match its grid");
            if (c.kind != kind(l))
                throw ConfigError(where + ": layer kind cannot change");
            if (!c.phases.allFinite())
                throw ConfigError(where + ": non-finite phase");
            if (is_phase_controlled(c.kind))
            {
                if ((c.amplitudes.array() != config_.alpha_pc).any())
                    throw ConfigError(where + ": amplitudes must all equal alpha_pc");
            }
            else if ((c.amplitudes.array() < lo).any() || (c.amplitudes.array() > hi).any())
                throw ConfigError(where + ": amplitude outside [alpha_min, alpha_max]");
        }
    }

    void SimStack::set_slot_phases(SlotPhases phases)
    {
        if (phases.element_count() != z())
            throw ConfigError("slot phases cover " + std::to_string(phases.element_count()) +
                              " elements, the ST-coded layer has " + std::to_string(z()));
        if (phases.slot_count() < 1)
            throw ConfigError("slot phases must cover at least one slot");
        if (!(phases.beta > 0.0) || phases.beta > 1.0)
            throw ConfigError("slot phase amplitude beta must lie in (0, 1]");
        slot_phases_ = std::move(phases);
    }

    cmat SimStack::compose_space_block() const
    {
        // Right-to-left: start at W_2 and apply Gamma_l then W_{l+1}
        cmat g = propagation(2);
        for (int l = 2; l <= layer_count_; ++l)
        {
            g = coefficients_[l - 2].gamma().asDiagonal() * g;
            if (l < layer_count_)
                g = propagation(l + 1) * g;
        }
        if (g.rows() != v() || g.cols() != z())
            throw ConfigError("space block has unexpected dimensions");
        return g;
    }

    cmat SimStack::slot_response(int slot) const { return slot_response(compose_space_block(), slot); }

    cmat SimStack::slot_response(const cmat &space_block, int slot) const
    {
        if (space_block.rows() != v() || space_block.cols() != z())
            throw ConfigError("slot_response: space block must be V x Z");
        const cvec delta = slot_phases_.coefficients(slot);
        return space_block * delta.asDiagonal() * propagation(1);
    }

    double SimStack::radiated_power_ratio() const
    {
        return stsim::radiated_power_ratio(propagation(1), compose_space_block(), slot_phases_.beta);
    }

    double radiated_power_ratio(const cmat &w1, const cmat &space_block, double beta)
    {
        if (w1.rows() != space_block.cols())
            throw ConfigError("radiated_power_ratio: W_1 rows must match space block columns");
        // sum_n |W1_{z,n}|^2 per z, times column power of G_0
        const rvec row_power = w1.rowwise().squaredNorm();
        const rvec col_power = space_block.colwise().squaredNorm().transpose();
        return beta * beta * row_power.dot(col_power);
    }
}
