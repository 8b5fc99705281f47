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

#ifndef STSIM_EXPERIMENT_HPP
#define STSIM_EXPERIMENT_HPP

#include "stsim/common.hpp"
#include "stsim/downlink.hpp"
#include "stsim/pgd.hpp"
#include "stsim/sim_stack.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stsim
{
    enum class ExperimentKind
    {
        SynthSweepLayers, // objective vs number of PC layers
        SynthConvergence, // objective trace vs iteration
        SumRateVsUsers,
        FairnessVsUsers,
        Custom
    };

    std::string to_string(ExperimentKind kind);
    ExperimentKind experiment_kind_from_string(const std::string &name);

    struct SweepAxes
    {
        std::vector<int> q;    // intermediate layer element counts (perfect squares)
        std::vector<int> l_pc; // PC layer counts, terminal DAL included
        std::vector<int> u;    // user counts
        std::vector<int> m;    // slots per coherence interval
    };

    struct ExperimentConfig
    {
        ExperimentKind kind = ExperimentKind::Custom;
        std::string label = "custom"; // first CSV column
        StackConfig stack;
        DownlinkScenario scenario; // user_count/slot_count/streams/carrier are taken from sweep and stack
        PgdConfig pgd;
        SweepAxes sweep;
        int trials = 1;
        std::uint64_t master_seed = 0;
        std::string output;         // CSV path, empty: <label>.csv
        std::string summary_output; // JSON path, empty: <output>.summary.json
        FairnessVariant fairness_variant = FairnessVariant::CoherenceWindow;
        bool fairness_normalized = false;
        double eta_feedback = 1.0;
        double scale = 1.0; // area factor on Q and Z element counts, linear factor on U
        int threads = 0;    // 0: hardware concurrency
        bool evaluate_downlink = true; // Custom kind only; implied by the other kinds

        bool runs_downlink() const;
        bool records_trace() const { return kind == ExperimentKind::SynthConvergence; }
        std::string csv_path() const;
        std::string summary_path() const;

        // Every violated field; empty when valid
        std::vector<std::string> violations() const;
        // Non-fatal remarks, e.g. M > V / N
        std::vector<std::string> warnings() const;
        void validate() const;
    };

    // fig3, fig4, fig5, fig6 or custom
    ExperimentConfig preset(const std::string &name);

    // Stack geometry of one sweep point after scaling
    StackConfig stack_for_point(const ExperimentConfig &config, int q, int l_pc);

    struct ResultRecord
    {
        std::string experiment;
        int q = 0;
        int l_pc = 0;
        int u = -1; // -1 when the metric does not depend on it
        int m = -1;
        int trial = 0;
        std::string metric;
        double value = 0.0;
        std::uint64_t seed = 0;
        double elapsed_s = 0.0;
        bool failed = false;
    };

    // Runs every (Q, L_pc) point x trial, each synthesised once and evaluated
    // for every (U, M). Output order is fixed by point and trial index.
    std::vector<ResultRecord> run_experiment(const ExperimentConfig &config);

    struct SynthesisRun
    {
        StackConfig stack;
        TargetMatrix target;
        PgdState state;
        std::uint64_t seed = 0;
        double objective_db = 0.0;
        double radiated_power_ratio = 0.0;
        double norm_deviation = 0.0;
    };

    // One PGD run for the first sweep point and trial 0
    SynthesisRun synthesize(const ExperimentConfig &config);

    struct SummaryRow
    {
        std::string experiment;
        int q = 0, l_pc = 0, u = -1, m = -1;
        std::string metric;
        int count = 0;  // successful records
        int failed = 0; // failed trials at this point
        double median = 0, mean = 0, p10 = 0, p90 = 0;
        bool flagged = false; // no successful trial
    };

    // Nearest-rank percentile of an unsorted sample, p in [0, 100]
    double percentile_nearest_rank(std::vector<double> values, double p);
    double median(std::vector<double> values);

    std::vector<SummaryRow> summarize(const std::vector<ResultRecord> &records);

    void write_csv(const std::vector<ResultRecord> &records, std::ostream &out);
    void write_csv(const std::vector<ResultRecord> &records, const std::string &path);
    // Summary table plus the fully resolved config
    void write_summary_json(const std::vector<SummaryRow> &rows, const ExperimentConfig &config, std::ostream &out);
    void write_summary_json(const std::vector<SummaryRow> &rows, const ExperimentConfig &config,
                            const std::string &path);

    // iteration, objective_linear, objective_db, step_layer_2 .. step_layer_L
    void write_trace_csv(const PgdState &state, const TargetMatrix &target, std::ostream &out);
}

#endif
