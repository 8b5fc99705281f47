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

// Command-line front end. Talks to the simulator through the C API only.

#include "stsim/stsim.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

namespace
{
    struct Overrides
    {
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::optional<std::string> out;
        std::optional<std::string> summary;
        std::optional<double> scale;
        std::optional<std::string> fairness;
        std::optional<double> eta;
        std::optional<double> d0;
        std::optional<int> threads;
        std::optional<int> max_iterations;
    };

    void add_overrides(CLI::App *app, Overrides &o)
    {
        app->add_option("--seed", o.seed, "Master seed");
        app->add_option("--trials", o.trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
        app->add_option("--out", o.out, "CSV output path (trace CSV for synth)");
        app->add_option("--summary", o.summary, "JSON summary path (default: <out>.summary.json)");
        app->add_option("--scale", o.scale, "Shrink Q, Z and U counts by this factor")
            ->check(CLI::Range(0.0, 1.0));
        app->add_option("--fairness-variant", o.fairness, "Headline fairness index")
            ->check(CLI::IsMember({"per-slot", "coherence"}));
        app->add_option("--eta", o.eta, "Path-loss exponent")->check(CLI::PositiveNumber);
        app->add_option("--d0", o.d0, "Path-loss reference distance in m")->check(CLI::PositiveNumber);
        app->add_option("--threads", o.threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
        app->add_option("--max-iterations", o.max_iterations, "PGD sweep limit")->check(CLI::PositiveNumber);
    }

    int report(stsim_status s)
    {
        std::fprintf(stderr, "stsim: %s: %s\n", stsim_status_string(s), stsim_last_error());
        return s == STSIM_ERROR_CONFIG ? 2 : 1;
    }

#define CHECK(call)                                                                                                    \
    do                                                                                                                 \
    {                                                                                                                  \
        stsim_status s_ = (call);                                                                                      \
        if (s_ != STSIM_OK)                                                                                            \
            return report(s_);                                                                                         \
    } while (0)

    int apply(stsim_experiment *cfg, const Overrides &o, bool out_is_csv)
    {
        if (o.seed)
            CHECK(stsim_experiment_set_seed(cfg, *o.seed));
        if (o.trials)
            CHECK(stsim_experiment_set_trials(cfg, *o.trials));
        if (o.out && out_is_csv)
            CHECK(stsim_experiment_set_output(cfg, o.out->c_str()));
        if (o.summary)
            CHECK(stsim_experiment_set_summary_output(cfg, o.summary->c_str()));
        if (o.scale)
            CHECK(stsim_experiment_set_scale(cfg, *o.scale));
        if (o.fairness)
            CHECK(stsim_experiment_set_fairness_variant(cfg, o.fairness->c_str()));
        if (o.eta)
            CHECK(stsim_experiment_set_pathloss_exponent(cfg, *o.eta));
        if (o.d0)
            CHECK(stsim_experiment_set_reference_distance(cfg, *o.d0));
        if (o.threads)
            CHECK(stsim_experiment_set_threads(cfg, *o.threads));
        if (o.max_iterations)
            CHECK(stsim_experiment_set_max_iterations(cfg, *o.max_iterations));
        char *msg = nullptr;
        stsim_status s = stsim_experiment_validate(cfg, &msg);
        if (s != STSIM_OK)
        {
            std::fprintf(stderr, "stsim: invalid configuration:\n%s\n", msg ? msg : stsim_last_error());
            stsim_string_free(msg);
            return 2;
        }
        stsim_string_free(msg);
        char *warn = nullptr;
        CHECK(stsim_experiment_warnings(cfg, &warn));
        if (warn && *warn)
            std::fprintf(stderr, "stsim: warning: %s\n", warn);
        stsim_string_free(warn);
        return 0;
    }

    int run_experiment(stsim_experiment *cfg, const Overrides &o)
    {
        if (int rc = apply(cfg, o, true))
            return rc;
        stsim_results *res = nullptr;
        CHECK(stsim_experiment_run(cfg, &res));
        char *csv = nullptr;
        char *summary = nullptr;
        stsim_experiment_csv_path(cfg, &csv);
        stsim_experiment_summary_path(cfg, &summary);
        stsim_status s = stsim_results_write_csv(res, csv);
        if (s == STSIM_OK)
            s = stsim_results_write_summary(res, cfg, summary);
        std::size_t n = stsim_results_count(res);
        std::size_t failed = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            stsim_record r;
            if (stsim_results_get(res, i, &r) == STSIM_OK && r.failed)
                ++failed;
        }
        if (s == STSIM_OK)
            std::printf("wrote %zu records to %s (summary %s)%s\n", n, csv, summary,
                        failed ? ", some trials failed" : "");
        stsim_string_free(csv);
        stsim_string_free(summary);
        stsim_results_destroy(res);
        if (s != STSIM_OK)
            return report(s);
        return failed ? 3 : 0;
    }

    int run_synth(stsim_experiment *cfg, const Overrides &o, const std::string &trace)
    {
        if (int rc = apply(cfg, o, false))
            return rc;
        stsim_synthesis *syn = nullptr;
        CHECK(stsim_synthesize(cfg, &syn));
        double obj = 0, ratio = 0;
        int iters = 0;
        stsim_synthesis_objective_db(syn, &obj);
        stsim_synthesis_iterations(syn, &iters);
        stsim_synthesis_radiated_power_ratio(syn, &ratio);
        std::printf("objective %.4f dB after %d iterations, radiated power ratio %.6f\n", obj, iters, ratio);
        stsim_status s = STSIM_OK;
        std::string path = !trace.empty() ? trace : (o.out ? *o.out : std::string());
        if (!path.empty())
        {
            s = stsim_synthesis_write_trace(syn, path.c_str());
            if (s == STSIM_OK)
                std::printf("trace written to %s\n", path.c_str());
        }
        stsim_synthesis_destroy(syn);
        return s == STSIM_OK ? 0 : report(s);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"stsim: randomized space-time coded stacked metasurface downlink simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(stsim_version()));

    Overrides synth_o, run_o;
    std::string synth_config, synth_preset = "fig4", trace, run_config;

    CLI::App *synth = app.add_subcommand("synth", "Single PGD synthesis run with optional trace CSV");
    synth->add_option("config", synth_config, "Experiment config JSON (default: --preset)");
    synth->add_option("--preset", synth_preset, "Preset when no config file is given")
        ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6", "custom"}));
    synth->add_option("--trace", trace, "Per-iteration trace CSV path");
    add_overrides(synth, synth_o);

    Overrides fig_o[4];
    const char *figs[4] = {"fig3", "fig4", "fig5", "fig6"};
    const char *about[4] = {"Objective vs number of PC layers", "PGD convergence traces",
                            "TA sum rate vs number of users", "Fairness vs number of users"};
    CLI::App *fig_apps[4];
    for (int i = 0; i < 4; ++i)
    {
        fig_apps[i] = app.add_subcommand(figs[i], about[i]);
        add_overrides(fig_apps[i], fig_o[i]);
    }

    CLI::App *run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    run->add_option("config", run_config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    add_overrides(run, run_o);

    CLI11_PARSE(app, argc, argv);

    stsim_experiment *cfg = nullptr;
    int rc = 0;
    if (*synth)
    {
        stsim_status s = synth_config.empty() ? stsim_experiment_create_preset(synth_preset.c_str(), &cfg)
                                              : stsim_experiment_load(synth_config.c_str(), &cfg);
        if (s != STSIM_OK)
            return report(s);
        rc = run_synth(cfg, synth_o, trace);
    }
    else if (*run)
    {
        stsim_status s = stsim_experiment_load(run_config.c_str(), &cfg);
        if (s != STSIM_OK)
            return report(s);
        rc = run_experiment(cfg, run_o);
    }
    else
    {
        for (int i = 0; i < 4; ++i)
            if (*fig_apps[i])
            {
                stsim_status s = stsim_experiment_create_preset(figs[i], &cfg);
                if (s != STSIM_OK)
                    return report(s);
                rc = run_experiment(cfg, fig_o[i]);
            }
    }
    stsim_experiment_destroy(cfg);
    return rc;
}
