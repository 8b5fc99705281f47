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

#include "stsim/pgd.hpp"
#include "stsim/rng.hpp"

#include <cmath>
#include <ostream>

namespace stsim
{
    std::vector<std::string> PgdConfig::violations() const
    {
        std::vector<std::string> v;
        if (max_iterations < 1)
            v.push_back("max_iterations must be >= 1");
        if (!(relative_tolerance >= 0.0))
            v.push_back("relative_tolerance must be >= 0");
        if (!(backtracking_contraction > 0.0 && backtracking_contraction < 1.0))
            v.push_back("backtracking_contraction must lie in (0, 1)");
        if (!(armijo_constant > 0.0 && armijo_constant < 1.0))
            v.push_back("armijo_constant must lie in (0, 1)");
        if (!(initial_step > 0.0))
            v.push_back("initial_step must be positive");
        if (max_backtracks < 1)
            v.push_back("max_backtracks must be >= 1");
        if (!(alpha_min > 0.0) || !(alpha_min <= alpha_max))
            v.push_back("amplitude bounds must satisfy 0 < alpha_min <= alpha_max");
        return v;
    }

    void PgdConfig::validate() const
    {
        auto v = violations();
        if (v.empty())
            return;
        std::string msg = "invalid PGD config:";
        for (const auto &s : v)
            msg += "\n  - " + s;
        throw ConfigError(msg);
    }

    double objective(const cmat &space_block, const cmat &target)
    {
        if (space_block.rows() != target.rows() || space_block.cols() != target.cols())
            throw ConfigError("objective: G_0 and G_targ dimensions differ");
        return (space_block - target).squaredNorm();
    }

    double objective(const SimStack &stack, const TargetMatrix &target)
    {
        return objective(stack.compose_space_block(), target.entries);
    }

    double normalized_objective_db(double objective, const TargetMatrix &target)
    {
        return 10.0 * std::log10(objective / target.entries.squaredNorm());
    }

    LayerFactors layer_factors(const SimStack &stack, int layer)
    {
        const int last = stack.layer_count();
        if (layer < 2 || layer > last)
            throw IndexError("layer_factors: layer " + std::to_string(layer) + " outside [2, " +
                             std::to_string(last) + "]");

        LayerFactors f;
        f.upstream = stack.propagation(2);
        for (int l = 2; l < layer; ++l)
            f.upstream = stack.propagation(l + 1) * (stack.coefficients(l).gamma().asDiagonal() * f.upstream);

        f.downstream = cmat::Identity(stack.v(), stack.v());
        for (int l = last; l > layer; --l)
            f.downstream = (f.downstream * stack.coefficients(l).gamma().asDiagonal()) * stack.propagation(l);
        return f;
    }

    AuxiliaryTerms auxiliary_terms(const SimStack &stack, const TargetMatrix &target, int layer)
    {
        const auto [e, b] = layer_factors(stack, layer);
        if (target.entries.rows() != e.rows() || target.entries.cols() != b.cols())
            throw ConfigError("auxiliary_terms: target dimensions differ from G_0");
        AuxiliaryTerms t;
        t.a = (b.conjugate() * b.transpose()).cwiseProduct(e.adjoint() * e);
        t.v = e.adjoint().cwiseProduct(b.conjugate() * target.entries.transpose()).rowwise().sum();
        return t;
    }

    namespace
    {
        // d f / d conj(gamma) from the residual: sum_z conj(b_z) o (E^H r_z)
        cvec wirtinger_gradient(const cmat &downstream, const cmat &upstream, const cmat &residual)
        {
            return upstream.conjugate().cwiseProduct(downstream.adjoint() * residual).rowwise().sum();
        }

        rvec real_gradient(const LayerCoefficients &c, const cvec &wirtinger, GradientKind kind)
        {
            rvec g(c.size());
            for (int i = 0; i < c.size(); ++i)
            {
                // phase: 2 Im{conj(gamma) w}; amplitude: 2 Re{conj(gamma) w} / alpha = 2 Re{e^{-j phi} w}
                if (kind == GradientKind::Phase)
                    g(i) = 2.0 * (std::conj(std::polar(c.amplitudes(i), c.phases(i))) * wirtinger(i)).imag();
                else
                    g(i) = 2.0 * (std::polar(1.0, -c.phases(i)) * wirtinger(i)).real();
            }
            return g;
        }

        void check_kind(LayerKind layer_kind, GradientKind kind, int layer)
        {
            const bool ok = kind == GradientKind::Phase ? is_phase_controlled(layer_kind)
                                                        : is_amplitude_controlled(layer_kind);
            if (!ok)
                throw UsageError("layer " + std::to_string(layer) + " is " + to_string(layer_kind) + ", it has no " +
                                 (kind == GradientKind::Phase ? "phase" : "amplitude") + " gradient");
        }
    }

    rvec gradient(const SimStack &stack, const TargetMatrix &target, int layer, GradientKind kind)
    {
        if (layer < 2 || layer > stack.layer_count())
            throw IndexError("gradient: layer " + std::to_string(layer) + " outside the space-coded block");
        const auto &c = stack.coefficients(layer);
        check_kind(c.kind, kind, layer);
        const auto [e, b] = layer_factors(stack, layer);
        const cmat residual = e * c.gamma().asDiagonal() * b - target.entries;
        return real_gradient(c, wirtinger_gradient(e, b, residual), kind);
    }

    rvec project_amplitude(const rvec &alpha, double alpha_min, double alpha_max)
    {
        return alpha.cwiseMax(alpha_min).cwiseMin(alpha_max);
    }

    void initialize_coefficients(SimStack &stack, const PgdConfig &config)
    {
        for (int l = 2; l <= stack.layer_count(); ++l)
        {
            auto &c = stack.mutable_coefficients(l);
            if (is_phase_controlled(c.kind))
            {
                rng::Engine e(rng::derive(config.seed, rng::kPgdInit, static_cast<std::uint64_t>(l)));
                for (int i = 0; i < c.size(); ++i)
                    c.phases(i) = kTwoPi * rng::uniform01(e);
            }
            else
                c.amplitudes = project_amplitude(rvec::Ones(c.size()), config.alpha_min, config.alpha_max);
        }
        stack.validate_coefficients();
    }

    PgdState run_pgd(SimStack &stack, const TargetMatrix &target, const PgdConfig &config)
    {
        config.validate();
        const auto &tgt = target.entries;
        if (tgt.rows() != stack.v() || tgt.cols() != stack.z())
            throw ConfigError("run_pgd: target must be V x Z");
        const auto &sc = stack.config();
        if (config.alpha_min < sc.alpha_min() * (1.0 - 1e-12) || config.alpha_max > sc.alpha_max() * (1.0 + 1e-12))
            throw ConfigError("run_pgd: amplitude bounds exceed the stack's AC range");

        if (config.initialize)
            initialize_coefficients(stack, config);

        const int last = stack.layer_count();
        PgdState state;
        double f = objective(stack, target);
        state.objective_trace.push_back(f);

        std::vector<cmat> downstream(last + 1);
        for (int iter = 1; iter <= config.max_iterations; ++iter)
        {
            const double f_start = f;

            // E_l from the coefficients at the start of the sweep; layers after l
            // are untouched until l itself has been updated.
            downstream[last] = cmat::Identity(stack.v(), stack.v());
            for (int l = last - 1; l >= 2; --l)
                downstream[l] =
                    (downstream[l + 1] * stack.coefficients(l + 1).gamma().asDiagonal()) * stack.propagation(l + 1);

            cmat upstream = stack.propagation(2);
            std::vector<double> steps(last - 1, 0.0);

            for (int l = 2; l <= last; ++l)
            {
                auto &coef = stack.mutable_coefficients(l);
                const cmat &e = downstream[l];
                const bool phase = is_phase_controlled(coef.kind);
                const GradientKind kind = phase ? GradientKind::Phase : GradientKind::Amplitude;

                auto evaluate = [&](const LayerCoefficients &c) {
                    return ((e * c.gamma().asDiagonal()) * upstream - tgt).squaredNorm();
                };

                const cmat residual = (e * coef.gamma().asDiagonal()) * upstream - tgt;
                const rvec grad = real_gradient(coef, wirtinger_gradient(e, upstream, residual), kind);

                if (grad.squaredNorm() > 0.0)
                {
                    LayerCoefficients trial = coef;
                    double step = config.initial_step;
                    bool accepted = false;
                    for (int k = 0; k < config.max_backtracks; ++k, step *= config.backtracking_contraction)
                    {
                        if (phase)
                            trial.phases = coef.phases - step * grad;
                        else
                            trial.amplitudes =
                                project_amplitude(coef.amplitudes - step * grad, config.alpha_min, config.alpha_max);

                        const rvec &x_old = phase ? coef.phases : coef.amplitudes;
                        const rvec &x_new = phase ? trial.phases : trial.amplitudes;
                        const double f_new = evaluate(trial);
                        if (f_new <= f + config.armijo_constant * grad.dot(x_new - x_old))
                        {
                            coef = trial;
                            f = f_new;
                            steps[l - 2] = step;
                            accepted = true;
                            break;
                        }
                    }
                    if (!accepted)
                    {
                        ++state.frozen_updates;
                        if (config.log)
                            *config.log << "pgd: iteration " << iter << ", layer " << l
                                        << " found no decreasing step; frozen\n";
                    }
                }

                if (l < last)
                    upstream = stack.propagation(l + 1) * (coef.gamma().asDiagonal() * upstream);
            }

            state.objective_trace.push_back(f);
            state.step_trace.push_back(std::move(steps));
            state.iteration = iter;
            if (config.observer)
                config.observer(iter, stack, f);

            if (f <= 0.0 || (f_start - f) <= config.relative_tolerance * f_start)
            {
                state.converged = true;
                break;
            }
        }

        for (int l = 2; l <= last; ++l)
        {
            state.phases.push_back(stack.coefficients(l).phases);
            state.amplitudes.push_back(stack.coefficients(l).amplitudes);
        }
        stack.validate_coefficients();
        return state;
    }

    double norm_constraint_deviation(const SimStack &stack)
    {
        const double beta = stack.slot_phases().beta;
        const double scale = beta * beta * stack.propagation(1).squaredNorm();
        const rvec col = stack.compose_space_block().colwise().squaredNorm().transpose();
        return (col.array() * scale - 1.0).abs().maxCoeff();
    }
}
