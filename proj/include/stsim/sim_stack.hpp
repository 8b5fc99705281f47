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

#ifndef STSIM_SIM_STACK_HPP
#define STSIM_SIM_STACK_HPP

#include "stsim/common.hpp"
#include "stsim/geometry.hpp"
#include "stsim/propagation.hpp"
#include "stsim/st_randomizer.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stsim
{
    enum class LayerKind
    {
        StDal,
        PhaseControlled,
        AmplitudeControlled,
        TerminalDalPc,
        TerminalDalAc
    };

    std::string to_string(LayerKind kind);
    LayerKind layer_kind_from_string(const std::string &name);

    // True for kinds whose phase is the free variable (PC layers, PC terminal DAL)
    bool is_phase_controlled(LayerKind kind);
    bool is_amplitude_controlled(LayerKind kind);

    struct LayerCoefficients
    {
        LayerKind kind = LayerKind::PhaseControlled;
        rvec amplitudes;
        rvec phases;

        int size() const { return static_cast<int>(amplitudes.size()); }
        cvec gamma() const;
    };

    // Geometry, layer kinds and amplitude constraints of a stack. Mirrors the
    // "stack" fragment of an experiment config document.
    struct StackConfig
    {
        double carrier_hz = 28.0e9;
        int upa_x = 2, upa_y = 2;           // N = upa_x * upa_y
        int st_dal_x = 3, st_dal_y = 3;     // Z
        int layer_x = 8, layer_y = 8;       // Q
        int terminal_x = 5, terminal_y = 5; // V

        // Layer counts of the space-coded block (layers 2..L). The terminal DAL
        // counts towards the group of its kind, so L = 1 + num_ac + num_pc.
        int num_ac = 4;
        int num_pc = 8;
        LayerKind terminal_kind = LayerKind::TerminalDalPc;
        // Explicit kinds for layers 2..L; overrides num_ac/num_pc/terminal_kind when non-empty
        std::vector<LayerKind> layer_kinds;

        double spacing_wavelengths = 0.5;           // d_upa = d_meta
        double layer_separation_wavelengths = 0.5;  // s_lay
        double bs_separation_wavelengths = 0.5;     // s_bs
        std::optional<double> element_area_bs;      // m^2, default spacing^2
        std::optional<double> element_area_meta;    // m^2, default spacing^2
        Alignment alignment = Alignment::IndexAligned;

        double alpha_pc = 0.9;
        double alpha_min_db = -22.0;
        double alpha_max_db = 13.0;
        double beta = 1.0;
        std::optional<std::uint64_t> ac_phase_seed; // unset: AC phases are zero

        double wavelength() const { return kSpeedOfLight / carrier_hz; }
        double spacing() const { return spacing_wavelengths * wavelength(); }
        double alpha_min() const { return db_to_amplitude(alpha_min_db); }
        double alpha_max() const { return db_to_amplitude(alpha_max_db); }
        int n() const { return upa_x * upa_y; }
        int z() const { return st_dal_x * st_dal_y; }
        int q() const { return layer_x * layer_y; }
        int v() const { return terminal_x * terminal_y; }

        // Kinds of layers 2..L in order
        std::vector<LayerKind> resolved_kinds() const;
        int layer_count() const { return 1 + static_cast<int>(resolved_kinds().size()); }

        // Every violated constraint, empty when valid
        std::vector<std::string> violations() const;
        void validate() const;
    };

    // Full stack: grids, cached propagation matrices W_1..W_L and the layer
    // coefficients. Layers are numbered 1..L; layer 1 is the ST-coded DAL.
    class SimStack
    {
    public:
        explicit SimStack(StackConfig config);

        const StackConfig &config() const { return config_; }
        int layer_count() const { return layer_count_; }
        int n() const { return upa_.total(); }
        int z() const { return grids_.front().total(); }
        int v() const { return grids_.back().total(); }

        const GridSpec &upa_grid() const { return upa_; }
        const GridSpec &grid(int layer) const;
        const cmat &propagation(int layer) const;
        double w1_frobenius() const { return propagation(1).norm(); }

        LayerKind kind(int layer) const;
        const LayerCoefficients &coefficients(int layer) const;
        // Replaces one layer's coefficients; throws ConfigError on a kind invariant violation.
        void set_coefficients(int layer, LayerCoefficients coefficients);
        // Unchecked in-place access for optimizers; call validate_coefficients() afterwards.
        LayerCoefficients &mutable_coefficients(int layer);
        void validate_coefficients() const;

        void set_slot_phases(SlotPhases phases);
        const SlotPhases &slot_phases() const { return slot_phases_; }
        int slot_count() const { return slot_phases_.slot_count(); }

        // G_0 = Gamma_L W_L ... Gamma_2 W_2, V x Z
        cmat compose_space_block() const;
        // G~(m) = G_0 diag(delta^(m)) W_1, V x N
        cmat slot_response(int slot) const;
        cmat slot_response(const cmat &space_block, int slot) const;
        // Time-averaged radiated power normalised by E / T_b
        double radiated_power_ratio() const;

    private:
        void check_layer(int layer, int lowest) const;

        StackConfig config_;
        int layer_count_ = 0;
        GridSpec upa_;
        std::vector<GridSpec> grids_;                         // layers 1..L
        std::vector<std::shared_ptr<const cmat>> propagation_; // W_1..W_L
        std::vector<LayerKind> kinds_;                         // layers 2..L, fixed at construction
        std::vector<LayerCoefficients> coefficients_;          // layers 2..L
        SlotPhases slot_phases_;
    };

    // beta^2 sum_n sum_z |[W_1]_{z,n}|^2 ||g_z||^2
    double radiated_power_ratio(const cmat &w1, const cmat &space_block, double beta);
}

#endif
