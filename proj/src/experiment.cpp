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

#include "stsim/experiment.hpp"

#include "stsim/config_io.hpp"
#include "stsim/rng.hpp"
#include "stsim/st_randomizer.hpp"
#include "stsim/target.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace stsim
{
    namespace
    {
        constexpr std::string_view kTrialStream = "trial";

        int exact_sqrt(int v)
        {
            if (v <= 0)
                return -1;
            int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v))));
            return s * s == v ? s : -1;
        }

        int scaled_side(int side, double scale)
        {
            if (scale == 1.0)
                return side;
            return std::max(1, static_cast<int>(std::lround(side * std::sqrt(scale))));
        }

        // Sweep axes with empty lists replaced by the stack / scenario value. With
        // scaling, user counts shrink linearly (at least N, duplicates dropped).
        SweepAxes effective_axes(const ExperimentConfig &c, bool scaled = true)
        {
            SweepAxes a = c.sweep;
            if (a.q.empty())
                a.q = {c.stack.q()};
            if (a.l_pc.empty())
            {
                if (c.stack.layer_kinds.empty())
                    a.l_pc = {c.stack.num_pc};
                else
                {
                    int pc = 0;
                    for (LayerKind k : c.stack.layer_kinds)
                        pc += is_phase_controlled(k) ? 1 : 0;
                    a.l_pc = {pc};
                }
            }
            if (a.u.empty())
                a.u = {c.scenario.user_count};
            if (a.m.empty())
                a.m = {c.scenario.slot_count};
            if (scaled && c.scale != 1.0)
            {
                std::vector<int> u;
                for (int x : a.u)
                {
                    int y = std::max(c.stack.n(), static_cast<int>(std::lround(x * c.scale)));
                    if (std::find(u.begin(), u.end(), y) == u.end())
                        u.push_back(y);
                }
                a.u = std::move(u);
            }
            return a;
        }

        std::string fmt(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        double seconds_since(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    }

    std::string to_string(ExperimentKind kind)
    {
        switch (kind)
        {
        case ExperimentKind::SynthSweepLayers:
            return "synth_sweep_layers";
        case ExperimentKind::SynthConvergence:
            return "synth_convergence";
        case ExperimentKind::SumRateVsUsers:
            return "sumrate_vs_users";
        case ExperimentKind::FairnessVsUsers:
            return "fairness_vs_users";
        case ExperimentKind::Custom:
            return "custom";
        }
        return "custom";
    }

    ExperimentKind experiment_kind_from_string(const std::string &name)
    {
        for (ExperimentKind k : {ExperimentKind::SynthSweepLayers, ExperimentKind::SynthConvergence,
                                 ExperimentKind::SumRateVsUsers, ExperimentKind::FairnessVsUsers,
                                 ExperimentKind::Custom})
            if (to_string(k) == name)
                return k;
        throw ConfigError("unknown experiment kind '" + name + "'");
    }

    bool ExperimentConfig::runs_downlink() const
    {
        switch (kind)
        {
        case ExperimentKind::SumRateVsUsers:
        case ExperimentKind::FairnessVsUsers:
            return true;
        case ExperimentKind::Custom:
            return evaluate_downlink;
        default:
            return false;
        }
    }

    std::string ExperimentConfig::csv_path() const { return output.empty() ? label + ".csv" : output; }

    std::string ExperimentConfig::summary_path() const
    {
        if (!summary_output.empty())
            return summary_output;
        std::string base = csv_path();
        if (base.size() > 4 && base.compare(base.size() - 4, 4, ".csv") == 0)
            base.resize(base.size() - 4);
        return base + ".summary.json";
    }

    std::vector<std::string> ExperimentConfig::violations() const
    {
        std::vector<std::string> out;
        for (const auto &s : stack.violations())
            out.push_back("stack: " + s);
        {
            DownlinkScenario sc = scenario;
            sc.carrier_hz = stack.carrier_hz;
            sc.streams = std::max(1, stack.n());
            for (const auto &s : sc.violations())
                out.push_back("scenario: " + s);
        }
        for (const auto &s : pgd.violations())
            out.push_back("pgd: " + s);
        if (label.empty())
            out.push_back("experiment label must not be empty");
        if (trials < 1)
            out.push_back("trials must be >= 1 (got " + std::to_string(trials) + ")");
        if (!(scale > 0.0 && scale <= 1.0))
            out.push_back("scale must lie in (0, 1] (got " + fmt(scale) + ")");
        if (threads < 0)
            out.push_back("threads must be >= 0");
        if (!(eta_feedback > 0.0))
            out.push_back("eta_feedback must be > 0");
        for (int q : sweep.q)
            if (exact_sqrt(q) < 0)
                out.push_back("sweep.Q entry " + std::to_string(q) + " is not a positive perfect square");
        for (int l : sweep.l_pc)
            if (l < 1)
                out.push_back("sweep.L_pc entries must be >= 1 (got " + std::to_string(l) + ")");
        if (!sweep.l_pc.empty() && !stack.layer_kinds.empty())
            out.push_back("sweep.L_pc cannot be combined with stack.layer_kinds");
        if (runs_downlink())
        {
            SweepAxes a = effective_axes(*this, false);
            for (int u : a.u)
                if (u < stack.n())
                    out.push_back("sweep.U entry " + std::to_string(u) + " is below the stream count N = " +
                                  std::to_string(stack.n()));
            for (int m : a.m)
                if (m < 1)
                    out.push_back("sweep.M entries must be >= 1 (got " + std::to_string(m) + ")");
        }
        // Every sweep point must give a valid stack
        if (out.empty())
        {
            SweepAxes a = effective_axes(*this);
            for (int q : a.q)
                for (int l : a.l_pc)
                    for (const auto &s : stack_for_point(*this, q, l).violations())
                        out.push_back("sweep point Q=" + std::to_string(q) + " L_pc=" + std::to_string(l) + ": " + s);
        }
        return out;
    }

    std::vector<std::string> ExperimentConfig::warnings() const
    {
        std::vector<std::string> out;
        if (!runs_downlink())
            return out;
        SweepAxes a = effective_axes(*this);
        for (int m : a.m)
            if (static_cast<double>(m) * stack.n() > stack.v())
                out.push_back("M = " + std::to_string(m) + " exceeds V / N = " + fmt(double(stack.v()) / stack.n()) +
                              "; partial-CSI training is no cheaper than full CSI");
        return out;
    }

    void ExperimentConfig::validate() const
    {
        auto v = violations();
        if (v.empty())
            return;
        std::string msg = "invalid experiment config:";
        for (const auto &s : v)
            msg += "\n  " + s;
        throw ConfigError(msg);
    }

    ExperimentConfig preset(const std::string &name)
    {
        ExperimentConfig c;
        if (name == "custom")
            return c;

        // Boundary grids sit centred on the Q-grid in every preset.
        c.stack.alignment = Alignment::Centered;
        c.stack.alpha_pc = 0.9;
        c.pgd.initial_step = 10.0;
        c.label = name;

        if (name == "fig3" || name == "fig4")
        {
            c.stack.st_dal_x = c.stack.st_dal_y = 3;
            c.stack.terminal_x = c.stack.terminal_y = 5;
            c.stack.num_ac = 4;
            c.stack.num_pc = 8;
            c.pgd.max_iterations = 2000;
            c.trials = 5;
            c.sweep.q = {25, 36, 49, 64};
            if (name == "fig3")
            {
                c.kind = ExperimentKind::SynthSweepLayers;
                for (int l = 4; l <= 14; ++l)
                    c.sweep.l_pc.push_back(l);
            }
            else
            {
                c.kind = ExperimentKind::SynthConvergence;
                c.sweep.l_pc = {8};
            }
            return c;
        }
        if (name == "fig5" || name == "fig6")
        {
            c.stack.st_dal_x = c.stack.st_dal_y = 10;
            c.stack.layer_x = c.stack.layer_y = 24;
            c.stack.terminal_x = c.stack.terminal_y = 3;
            c.stack.num_ac = 2;
            c.stack.num_pc = 6;
            c.pgd.max_iterations = 500;
            c.trials = 100;
            c.sweep.q = {576};
            c.sweep.l_pc = {6};
            c.sweep.u = {10, 50, 100, 200, 300, 400, 500};
            if (name == "fig5")
            {
                c.kind = ExperimentKind::SumRateVsUsers;
                c.sweep.m = {2};
            }
            else
            {
                c.kind = ExperimentKind::FairnessVsUsers;
                c.sweep.m = {2, 3, 4};
            }
            return c;
        }
        throw ConfigError("unknown preset '" + name + "' (expected fig3, fig4, fig5, fig6 or custom)");
    }

    StackConfig stack_for_point(const ExperimentConfig &config, int q, int l_pc)
    {
        StackConfig s = config.stack;
        int side = exact_sqrt(q);
        if (side < 0)
            throw ConfigError("Q = " + std::to_string(q) + " is not a perfect square");
        if (s.layer_kinds.empty())
            s.num_pc = l_pc;
        s.layer_x = s.layer_y = side;
        if (config.scale != 1.0)
        {
            s.st_dal_x = std::max(s.upa_x, scaled_side(s.st_dal_x, config.scale));
            s.st_dal_y = std::max(s.upa_y, scaled_side(s.st_dal_y, config.scale));
            int floor_x = std::max(s.st_dal_x, s.terminal_x);
            int floor_y = std::max(s.st_dal_y, s.terminal_y);
            s.layer_x = std::max(floor_x, scaled_side(side, config.scale));
            s.layer_y = std::max(floor_y, scaled_side(side, config.scale));
        }
        return s;
    }

    namespace
    {
        struct Job
        {
            int point = 0; // index into the (Q, L_pc) grid
            int q = 0;
            int l_pc = 0;
            int trial = 0;
        };

        struct Synthesised
        {
            SimStack stack;
            TargetMatrix target;
            PgdState state;
        };

        Synthesised synthesise(const ExperimentConfig &config, const StackConfig &sc, std::uint64_t trial_seed)
        {
            SimStack stack(sc);
            TargetMatrix target = generate_target(stack.z(), stack.v(), sc.beta, stack.w1_frobenius(),
                                                  rng::derive(trial_seed, rng::kTarget));
            PgdConfig pc = config.pgd;
            pc.seed = rng::derive(trial_seed, rng::kPgdInit);
            pc.alpha_min = sc.alpha_min();
            pc.alpha_max = sc.alpha_max();
            pc.initialize = true;
            pc.log = nullptr;
            PgdState state = run_pgd(stack, target, pc);
            return {std::move(stack), std::move(target), std::move(state)};
        }

        void run_job(const ExperimentConfig &config, const SweepAxes &axes, const Job &job,
                     std::vector<ResultRecord> &out)
        {
            const auto t0 = std::chrono::steady_clock::now();
            const std::uint64_t seed = rng::derive(config.master_seed, kTrialStream, job.point, job.trial);
            StackConfig sc = stack_for_point(config, job.q, job.l_pc);
            Synthesised syn = synthesise(config, sc, seed);
            const int q_eff = sc.q();

            auto emit = [&](int u, int m, const std::string &metric, double value, double elapsed) {
                ResultRecord r;
                r.experiment = config.label;
                r.q = q_eff;
                r.l_pc = job.l_pc;
                r.u = u;
                r.m = m;
                r.trial = job.trial;
                r.metric = metric;
                r.value = value;
                r.seed = seed;
                r.elapsed_s = elapsed;
                out.push_back(std::move(r));
            };

            const double f = syn.state.final_objective();
            const double synth_s = seconds_since(t0);
            const double ratio = syn.stack.radiated_power_ratio();
            emit(-1, -1, "objective_linear", f, synth_s);
            emit(-1, -1, "objective_db", normalized_objective_db(f, syn.target), synth_s);
            emit(-1, -1, "initial_objective_db", normalized_objective_db(syn.state.initial_objective(), syn.target),
                 synth_s);
            emit(-1, -1, "pgd_iterations", syn.state.iteration, synth_s);
            emit(-1, -1, "pgd_converged", syn.state.converged ? 1.0 : 0.0, synth_s);
            emit(-1, -1, "pgd_frozen_updates", syn.state.frozen_updates, synth_s);
            emit(-1, -1, "norm_deviation", norm_constraint_deviation(syn.stack), synth_s);
            emit(-1, -1, "radiated_power_ratio", ratio, synth_s);
            emit(-1, -1, "target_rank", syn.target.rank, synth_s);

            if (config.records_trace())
            {
                // Early-converged traces are held at their final value so every
                // trial contributes to every iteration.
                const auto &tr = syn.state.objective_trace;
                const int length = config.pgd.max_iterations + 1;
                for (int k = 0; k < length; ++k)
                {
                    double fk = tr[std::min<std::size_t>(k, tr.size() - 1)];
                    emit(-1, -1, "objective_db@" + std::to_string(k), normalized_objective_db(fk, syn.target),
                         synth_s);
                }
            }

            if (!config.runs_downlink())
                return;

            const int max_u = *std::max_element(axes.u.begin(), axes.u.end());
            const int max_m = *std::max_element(axes.m.begin(), axes.m.end());
            DownlinkScenario scn = config.scenario;
            scn.carrier_hz = sc.carrier_hz;
            scn.streams = syn.stack.n();
            scn.user_count = max_u;
            scn.slot_count = max_m;
            scn.validate();
            const double nu = scn.noise_over_energy();

            // Users and slot phases are drawn once for the largest U and M;
            // smaller points use prefixes, so drops are nested.
            syn.stack.set_slot_phases(draw_slot_phases(max_m, syn.stack.z(), rng::derive(seed, rng::kStPhases), sc.beta));
            const std::vector<UserChannel> users = drop_users(scn, syn.stack.v(), seed);
            const cmat g0 = syn.stack.compose_space_block();
            std::vector<cmat> effective;
            for (int m = 0; m < max_m; ++m)
                effective.push_back(effective_channels(users, syn.stack.slot_response(g0, m)));
            const double dl_base_s = seconds_since(t0);

            for (int u : axes.u)
            {
                std::vector<UserChannel> subset(users.begin(), users.begin() + u);
                for (int m_count : axes.m)
                {
                    const auto t1 = std::chrono::steady_clock::now();
                    std::vector<SlotScheduleResult> rnd;
                    for (int m = 0; m < m_count; ++m)
                        rnd.push_back(schedule_slot(effective[m].topRows(u), nu, m));
                    std::vector<SlotScheduleResult> base = baseline_mimo(subset, scn.streams, nu, m_count, ratio);
                    const rmat rr = per_user_rates(rnd, u);
                    const rmat br = per_user_rates(base, u);
                    const bool norm = config.fairness_normalized;
                    const double fr_slot = fairness_index(rr, FairnessVariant::PerSlot, norm);
                    const double fr_win = fairness_index(rr, FairnessVariant::CoherenceWindow, norm);
                    const double fb_slot = fairness_index(br, FairnessVariant::PerSlot, norm);
                    const double fb_win = fairness_index(br, FairnessVariant::CoherenceWindow, norm);
                    const bool per_slot = config.fairness_variant == FairnessVariant::PerSlot;
                    double served = 0.0;
                    for (const auto &r : rnd)
                        served += r.served_count();
                    served /= m_count;
                    const Overhead oh = overhead(scn.streams, m_count, u, syn.stack.v(), config.eta_feedback);
                    const double el = dl_base_s + seconds_since(t1);

                    emit(u, m_count, "ta_sum_rate", ta_sum_rate(rnd), el);
                    emit(u, m_count, "baseline_sum_rate", ta_sum_rate(base), el);
                    emit(u, m_count, "fairness", per_slot ? fr_slot : fr_win, el);
                    emit(u, m_count, "baseline_fairness", per_slot ? fb_slot : fb_win, el);
                    emit(u, m_count, "fairness_per_slot", fr_slot, el);
                    emit(u, m_count, "fairness_coherence", fr_win, el);
                    emit(u, m_count, "baseline_fairness_per_slot", fb_slot, el);
                    emit(u, m_count, "baseline_fairness_coherence", fb_win, el);
                    emit(u, m_count, "served_beams", served, el);
                    emit(u, m_count, "overhead_train_partial", oh.train_partial, el);
                    emit(u, m_count, "overhead_train_full", oh.train_full, el);
                    emit(u, m_count, "overhead_feed_partial", oh.feed_partial, el);
                    emit(u, m_count, "overhead_feed_full", oh.feed_full, el);
                    emit(u, m_count, "slots_within_budget", oh.slots_within_budget ? 1.0 : 0.0, el);
                }
            }
        }
    }

    std::vector<ResultRecord> run_experiment(const ExperimentConfig &config)
    {
        config.validate();
        const SweepAxes axes = effective_axes(config);

        std::vector<Job> jobs;
        int point = 0;
        for (int q : axes.q)
            for (int l : axes.l_pc)
            {
                for (int t = 0; t < config.trials; ++t)
                    jobs.push_back({point, q, l, t});
                ++point;
            }

        std::vector<std::vector<ResultRecord>> partial(jobs.size());
        std::atomic<std::size_t> next{0};
        std::mutex log_mutex;

        auto worker = [&]() {
            for (std::size_t i = next++; i < jobs.size(); i = next++)
            {
                const Job &job = jobs[i];
                const auto t0 = std::chrono::steady_clock::now();
                try
                {
                    run_job(config, axes, job, partial[i]);
                }
                catch (const std::exception &e)
                {
                    partial[i].clear();
                    ResultRecord r;
                    r.experiment = config.label;
                    r.q = stack_for_point(config, job.q, job.l_pc).q();
                    r.l_pc = job.l_pc;
                    r.trial = job.trial;
                    r.metric = "trial_failed";
                    r.value = 1.0;
                    r.seed = rng::derive(config.master_seed, kTrialStream, job.point, job.trial);
                    r.elapsed_s = seconds_since(t0);
                    r.failed = true;
                    partial[i].push_back(std::move(r));
                    std::lock_guard<std::mutex> lock(log_mutex);
                    std::cerr << "stsim: trial " << job.trial << " at Q=" << job.q << " L_pc=" << job.l_pc
                              << " failed: " << e.what() << "\n";
                }
            }
        };

        unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                                : std::max(1u, std::thread::hardware_concurrency());
        n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
        if (n_threads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < n_threads; ++t)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }

        std::vector<ResultRecord> records;
        for (auto &p : partial)
            for (auto &r : p)
                records.push_back(std::move(r));
        return records;
    }

    SynthesisRun synthesize(const ExperimentConfig &config)
    {
        config.validate();
        const SweepAxes axes = effective_axes(config);
        SynthesisRun run;
        run.stack = stack_for_point(config, axes.q.front(), axes.l_pc.front());
        run.seed = rng::derive(config.master_seed, kTrialStream, 0, 0);
        Synthesised syn = synthesise(config, run.stack, run.seed);
        run.objective_db = normalized_objective_db(syn.state.final_objective(), syn.target);
        run.radiated_power_ratio = syn.stack.radiated_power_ratio();
        run.norm_deviation = norm_constraint_deviation(syn.stack);
        run.target = std::move(syn.target);
        run.state = std::move(syn.state);
        return run;
    }

    double percentile_nearest_rank(std::vector<double> values, double p)
    {
        if (values.empty())
            throw ConfigError("percentile of an empty sample");
        if (!(p >= 0.0 && p <= 100.0))
            throw DomainError("percentile must lie in [0, 100]");
        std::sort(values.begin(), values.end());
        const double n = static_cast<double>(values.size());
        std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
        rank = std::clamp<std::size_t>(rank, 1, values.size());
        return values[rank - 1];
    }

    double median(std::vector<double> values)
    {
        if (values.empty())
            throw ConfigError("median of an empty sample");
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    }

    std::vector<SummaryRow> summarize(const std::vector<ResultRecord> &records)
    {
        using PointKey = std::tuple<std::string, int, int>;
        using Key = std::tuple<std::string, int, int, int, int, std::string>;
        std::map<PointKey, int> failures;
        std::map<Key, std::vector<double>> groups;
        std::vector<Key> order;
        for (const auto &r : records)
        {
            if (r.failed)
            {
                ++failures[{r.experiment, r.q, r.l_pc}];
                continue;
            }
            Key k{r.experiment, r.q, r.l_pc, r.u, r.m, r.metric};
            auto [it, fresh] = groups.try_emplace(k);
            if (fresh)
                order.push_back(k);
            it->second.push_back(r.value);
        }
        // Points where every trial failed still get a row
        for (const auto &[pk, n] : failures)
        {
            Key k{std::get<0>(pk), std::get<1>(pk), std::get<2>(pk), -1, -1, "trial_failed"};
            if (!groups.count(k))
            {
                groups[k];
                order.push_back(k);
            }
        }

        std::vector<SummaryRow> rows;
        for (const auto &k : order)
        {
            SummaryRow row;
            std::tie(row.experiment, row.q, row.l_pc, row.u, row.m, row.metric) = k;
            const auto &vals = groups[k];
            auto f = failures.find({row.experiment, row.q, row.l_pc});
            row.failed = f == failures.end() ? 0 : f->second;
            row.count = static_cast<int>(vals.size());
            row.flagged = row.failed > 0;
            if (!vals.empty())
            {
                row.median = median(vals);
                double s = 0.0;
                for (double v : vals)
                    s += v;
                row.mean = s / vals.size();
                row.p10 = percentile_nearest_rank(vals, 10.0);
                row.p90 = percentile_nearest_rank(vals, 90.0);
            }
            rows.push_back(std::move(row));
        }
        return rows;
    }

    void write_csv(const std::vector<ResultRecord> &records, std::ostream &out)
    {
        out << "experiment,Q,L_pc,U,M,trial,metric,value,seed,elapsed_s\n";
        auto key = [](int v) { return v < 0 ? std::string() : std::to_string(v); };
        for (const auto &r : records)
            out << r.experiment << ',' << r.q << ',' << r.l_pc << ',' << key(r.u) << ',' << key(r.m) << ','
                << r.trial << ',' << r.metric << ',' << fmt(r.value) << ',' << r.seed << ',' << fmt(r.elapsed_s)
                << '\n';
    }

    void write_csv(const std::vector<ResultRecord> &records, const std::string &path)
    {
        std::ofstream f(path);
        if (!f)
            throw std::ios_base::failure("cannot open '" + path + "' for writing");
        write_csv(records, f);
        if (!f)
            throw std::ios_base::failure("write to '" + path + "' failed");
    }

    void write_summary_json(const std::vector<SummaryRow> &rows, const ExperimentConfig &config, std::ostream &out)
    {
        nlohmann::ordered_json doc;
        doc["config"] = to_json(config);
        doc["warnings"] = config.warnings();
        auto &table = doc["summary"] = nlohmann::ordered_json::array();
        for (const auto &r : rows)
        {
            nlohmann::ordered_json j;
            j["experiment"] = r.experiment;
            j["Q"] = r.q;
            j["L_pc"] = r.l_pc;
            j["U"] = r.u < 0 ? nlohmann::ordered_json() : nlohmann::ordered_json(r.u);
            j["M"] = r.m < 0 ? nlohmann::ordered_json() : nlohmann::ordered_json(r.m);
            j["metric"] = r.metric;
            j["count"] = r.count;
            j["failed_trials"] = r.failed;
            j["flagged"] = r.flagged;
            j["median"] = r.median;
            j["mean"] = r.mean;
            j["p10"] = r.p10;
            j["p90"] = r.p90;
            table.push_back(std::move(j));
        }
        out << doc.dump(2) << '\n';
    }

    void write_summary_json(const std::vector<SummaryRow> &rows, const ExperimentConfig &config,
                            const std::string &path)
    {
        std::ofstream f(path);
        if (!f)
            throw std::ios_base::failure("cannot open '" + path + "' for writing");
        write_summary_json(rows, config, f);
        if (!f)
            throw std::ios_base::failure("write to '" + path + "' failed");
    }

    void write_trace_csv(const PgdState &state, const TargetMatrix &target, std::ostream &out)
    {
        const std::size_t layers = state.phases.size();
        out << "iteration,objective_linear,objective_db";
        for (std::size_t i = 0; i < layers; ++i)
            out << ",step_layer_" << i + 2;
        out << '\n';
        for (std::size_t k = 0; k < state.objective_trace.size(); ++k)
        {
            const double f = state.objective_trace[k];
            out << k << ',' << fmt(f) << ',' << fmt(normalized_objective_db(f, target));
            for (std::size_t i = 0; i < layers; ++i)
            {
                // Row 0 is the starting point, no step taken yet
                double s = k == 0 || k - 1 >= state.step_trace.size() ? 0.0 : state.step_trace[k - 1][i];
                out << ',' << fmt(s);
            }
            out << '\n';
        }
    }
}
