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

#ifndef STSIM_PGD_HPP
#define STSIM_PGD_HPP

#include "stsim/common.hpp"
#include "stsim/sim_stack.hpp"
#include "stsim/target.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace stsim
{
    struct PgdConfig
    {
        int max_iterations = 500;
        double relative_tolerance = 1e-8;
        double backtracking_contraction = 0.5;
        double armijo_constant = 1e-4;
        double initial_step = 1.0;
        int max_backtracks = 50;
        double alpha_min = db_to_amplitude(-22.0);
        double alpha_max = db_to_amplitude(13.0);
        std::uint64_t seed = 0;
        // Draw random phases and reset AC amplitudes to 1 before iterating
        bool initialize = true;
        // Frozen-layer messages go here when set
        std::ostream *log = nullptr;
        // Called after every sweep with the updated stack
        std::function<void(int iteration, const SimStack &stack, double objective)> observer;

        std::vector<std::string> violations() const;
        void validate() const;
    };

    struct PgdState
    {
        // Index i holds layer i + 2
        std::vector<rvec> phases;
        std::vector<rvec> amplitudes;
        // objective_trace[0] is the starting objective, entry k the value after sweep k
        std::vector<double> objective_trace;
        // step_trace[k][i]: step accepted for layer i + 2 in sweep k + 1 (0 when frozen)
        std::vector<std::vector<double>> step_trace;
        int iteration = 0;
        int frozen_updates = 0;
        bool converged = false;

        double initial_objective() const { return objective_trace.front(); }
        double final_objective() const { return objective_trace.back(); }
    };

    enum class GradientKind
    {
        Phase,
        Amplitude
    };

    // ||G_0 - G_targ||_F^2
    double objective(const cmat &space_block, const cmat &target);
    double objective(const SimStack &stack, const TargetMatrix &target);
    // 10 log10(f / ||G_targ||^2), the reporting scale of the convergence figures
    double normalized_objective_db(double objective, const TargetMatrix &target);

    // Downstream / upstream factors of layer l so that g_z = E diag(b_z) gamma_l:
    //   E_l = Gamma_L W_L ... Gamma_{l+1} W_{l+1}   (identity for l = L)
    //   B_l = W_l Gamma_{l-1} ... Gamma_2 W_2        (W_2 for l = 2)
    struct LayerFactors
    {
        cmat downstream; // E_l, V x S_l
        cmat upstream;   // B_l, S_l x Z
    };
    LayerFactors layer_factors(const SimStack &stack, int layer);

    // Hadamard-form quadratic terms: d f / d conj(gamma_l) = A_l gamma_l - v_l
    struct AuxiliaryTerms
    {
        cmat a; // (B* B^T) o (E^H E)
        cvec v; // [E^H o (B* G_targ^T)] 1
    };
    AuxiliaryTerms auxiliary_terms(const SimStack &stack, const TargetMatrix &target, int layer);

    // Gradient of f with respect to the phases (PC layers) or amplitudes (AC
    // layers) of `layer`. The amplitude gradient is the true partial d f / d alpha.
    rvec gradient(const SimStack &stack, const TargetMatrix &target, int layer, GradientKind kind);

    rvec project_amplitude(const rvec &alpha, double alpha_min, double alpha_max);

    // Random phases from config.seed for PC layers, unit (clamped) amplitudes for AC layers
    void initialize_coefficients(SimStack &stack, const PgdConfig &config);

    // Layer-by-layer projected gradient descent with Armijo backtracking. The
    // final coefficients are written back into `stack`.
    PgdState run_pgd(SimStack &stack, const TargetMatrix &target, const PgdConfig &config);

    // Largest |‖g_z‖² β² ‖W_1‖² − 1| over the columns of the composed block
    double norm_constraint_deviation(const SimStack &stack);
}

#endif
