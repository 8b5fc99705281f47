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

#include "stsim/stsim.h"

#include "stsim/config_io.hpp"
#include "stsim/experiment.hpp"
#include "stsim/propagation.hpp"

#include <cstring>
#include <fstream>
#include <ios>
#include <new>
#include <string>

struct stsim_experiment
{
    stsim::ExperimentConfig config;
};

struct stsim_results
{
    std::vector<stsim::ResultRecord> records;
};

struct stsim_synthesis
{
    stsim::SynthesisRun run;
};

namespace
{
    thread_local std::string g_last_error;

    stsim_status fail(stsim_status s, const char *what)
    {
        g_last_error = what;
        return s;
    }

    // Runs fn, mapping the exception hierarchy onto status codes
    template <class Fn>
    stsim_status guarded(Fn &&fn)
    {
        try
        {
            fn();
            g_last_error.clear();
            return STSIM_OK;
        }
        catch (const stsim::ConfigError &e)
        {
            return fail(STSIM_ERROR_CONFIG, e.what());
        }
        catch (const stsim::IndexError &e)
        {
            return fail(STSIM_ERROR_INDEX, e.what());
        }
        catch (const stsim::DomainError &e)
        {
            return fail(STSIM_ERROR_DOMAIN, e.what());
        }
        catch (const stsim::UsageError &e)
        {
            return fail(STSIM_ERROR_USAGE, e.what());
        }
        catch (const stsim::NumericError &e)
        {
            return fail(STSIM_ERROR_NUMERIC, e.what());
        }
        catch (const std::ios_base::failure &e)
        {
            return fail(STSIM_ERROR_IO, e.what());
        }
        catch (const std::bad_alloc &)
        {
            return fail(STSIM_ERROR_INTERNAL, "out of memory");
        }
        catch (const std::exception &e)
        {
            return fail(STSIM_ERROR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(STSIM_ERROR_INTERNAL, "unknown error");
        }
    }

    char *dup(const std::string &s)
    {
        char *p = new char[s.size() + 1];
        std::memcpy(p, s.c_str(), s.size() + 1);
        return p;
    }

    std::string joined(const std::vector<std::string> &lines)
    {
        std::string out;
        for (const auto &l : lines)
        {
            if (!out.empty())
                out += '\n';
            out += l;
        }
        return out;
    }
}

#define STSIM_REQUIRE(ptr)                                                                                             \
    do                                                                                                                 \
    {                                                                                                                  \
        if (!(ptr))                                                                                                    \
            return fail(STSIM_ERROR_INVALID_ARGUMENT, #ptr " must not be null");                                       \
    } while (0)

extern "C" {

const char *stsim_version(void) { return "0.1.0"; }

const char *stsim_status_string(stsim_status status)
{
    switch (status)
    {
    case STSIM_OK:
        return "ok";
    case STSIM_ERROR_INVALID_ARGUMENT:
        return "invalid argument";
    case STSIM_ERROR_CONFIG:
        return "configuration error";
    case STSIM_ERROR_INDEX:
        return "index out of range";
    case STSIM_ERROR_DOMAIN:
        return "domain error";
    case STSIM_ERROR_USAGE:
        return "usage error";
    case STSIM_ERROR_NUMERIC:
        return "numerical error";
    case STSIM_ERROR_IO:
        return "i/o error";
    case STSIM_ERROR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char *stsim_last_error(void) { return g_last_error.c_str(); }

void stsim_string_free(char *str) { delete[] str; }

stsim_status stsim_experiment_create_preset(const char *name, stsim_experiment **out)
{
    STSIM_REQUIRE(name);
    STSIM_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new stsim_experiment{stsim::preset(name)}; });
}

stsim_status stsim_experiment_create_from_json(const char *json, stsim_experiment **out)
{
    STSIM_REQUIRE(json);
    STSIM_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new stsim_experiment{stsim::experiment_from_json_text(json)}; });
}

stsim_status stsim_experiment_load(const char *path, stsim_experiment **out)
{
    STSIM_REQUIRE(path);
    STSIM_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new stsim_experiment{stsim::load_experiment(path)}; });
}

void stsim_experiment_destroy(stsim_experiment *config) { delete config; }

stsim_status stsim_experiment_set_seed(stsim_experiment *config, uint64_t seed)
{
    STSIM_REQUIRE(config);
    config->config.master_seed = seed;
    return STSIM_OK;
}

stsim_status stsim_experiment_set_trials(stsim_experiment *config, int trials)
{
    STSIM_REQUIRE(config);
    if (trials < 1)
        return fail(STSIM_ERROR_CONFIG, "trials must be >= 1");
    config->config.trials = trials;
    return STSIM_OK;
}

stsim_status stsim_experiment_set_scale(stsim_experiment *config, double scale)
{
    STSIM_REQUIRE(config);
    if (!(scale > 0.0 && scale <= 1.0))
        return fail(STSIM_ERROR_CONFIG, "scale must lie in (0, 1]");
    config->config.scale = scale;
    return STSIM_OK;
}

stsim_status stsim_experiment_set_threads(stsim_experiment *config, int threads)
{
    STSIM_REQUIRE(config);
    if (threads < 0)
        return fail(STSIM_ERROR_CONFIG, "threads must be >= 0");
    config->config.threads = threads;
    return STSIM_OK;
}

stsim_status stsim_experiment_set_output(stsim_experiment *config, const char *csv_path)
{
    STSIM_REQUIRE(config);
    STSIM_REQUIRE(csv_path);
    config->config.output = csv_path;
    return STSIM_OK;
}

stsim_status stsim_experiment_set_summary_output(stsim_experiment *config, const char *json_path)
{
    STSIM_REQUIRE(config);
    STSIM_REQUIRE(json_path);
    config->config.summary_output = json_path;
    return STSIM_OK;
}

stsim_status stsim_experiment_set_fairness_variant(stsim_experiment *config, const char *name)
{
    STSIM_REQUIRE(config);
    STSIM_REQUIRE(name);
    return guarded([&] { config->config.fairness_variant = stsim::fairness_variant_from_string(name); });
}

stsim_status stsim_experiment_set_pathloss_exponent(stsim_experiment *config, double eta)
{
    STSIM_REQUIRE(config);
    if (!(eta > 0.0))
        return fail(STSIM_ERROR_CONFIG, "path-loss exponent must be > 0");
    config->config.scenario.pathloss_exponent = eta;
    return STSIM_OK;
}

stsim_status stsim_experiment_set_reference_distance(stsim_experiment *config, double d0)
{
    STSIM_REQUIRE(config);
    if (!(d0 > 0.0))
        return fail(STSIM_ERROR_CONFIG, "reference distance must be > 0");
    config->config.scenario.reference_distance = d0;
    return STSIM_OK;
}

stsim_status stsim_experiment_set_max_iterations(stsim_experiment *config, int iterations)
{
    STSIM_REQUIRE(config);
    if (iterations < 1)
        return fail(STSIM_ERROR_CONFIG, "max_iterations must be >= 1");
    config->config.pgd.max_iterations = iterations;
    return STSIM_OK;
}

stsim_status stsim_experiment_to_json(const stsim_experiment *config, char **out_json)
{
    STSIM_REQUIRE(config);
    STSIM_REQUIRE(out_json);
    *out_json = nullptr;
    return guarded([&] { *out_json = dup(stsim::to_json(config->config).dump(2)); });
}

stsim_status stsim_experiment_validate(const stsim_experiment *config, char **out_messages)
{
    STSIM_REQUIRE(config);
    std::string text;
    stsim_status s = guarded([&] { text = joined(config->config.violations()); });
    if (s != STSIM_OK)
        return s;
    if (out_messages)
        *out_messages = dup(text);
    if (!text.empty())
        return fail(STSIM_ERROR_CONFIG, text.c_str());
    return STSIM_OK;
}

stsim_status stsim_experiment_warnings(const stsim_experiment *config, char **out_messages)
{
    STSIM_REQUIRE(config);
    STSIM_REQUIRE(out_messages);
    *out_messages = nullptr;
    return guarded([&] { *out_messages = dup(joined(config->config.warnings())); });
}

stsim_status stsim_experiment_csv_path(const stsim_experiment *config, char **out_path)
{
    STSIM_REQUIRE(config);
    STSIM_REQUIRE(out_path);
    *out_path = dup(config->config.csv_path());
    return STSIM_OK;
}

stsim_status stsim_experiment_summary_path(const stsim_experiment *config, char **out_path)
{
    STSIM_REQUIRE(config);
    STSIM_REQUIRE(out_path);
    *out_path = dup(config->config.summary_path());
    return STSIM_OK;
}

stsim_status stsim_experiment_run(const stsim_experiment *config, stsim_results **out)
{
    STSIM_REQUIRE(config);
    STSIM_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new stsim_results{stsim::run_experiment(config->config)}; });
}

void stsim_results_destroy(stsim_results *results) { delete results; }

size_t stsim_results_count(const stsim_results *results) { return results ? results->records.size() : 0; }

stsim_status stsim_results_get(const stsim_results *results, size_t index, stsim_record *out)
{
    STSIM_REQUIRE(results);
    STSIM_REQUIRE(out);
    if (index >= results->records.size())
        return fail(STSIM_ERROR_INDEX, "record index out of range");
    const auto &r = results->records[index];
    out->q = r.q;
    out->l_pc = r.l_pc;
    out->u = r.u;
    out->m = r.m;
    out->trial = r.trial;
    out->metric = r.metric.c_str();
    out->value = r.value;
    out->seed = r.seed;
    out->elapsed_s = r.elapsed_s;
    out->failed = r.failed ? 1 : 0;
    return STSIM_OK;
}

stsim_status stsim_results_write_csv(const stsim_results *results, const char *path)
{
    STSIM_REQUIRE(results);
    STSIM_REQUIRE(path);
    return guarded([&] { stsim::write_csv(results->records, std::string(path)); });
}

stsim_status stsim_results_write_summary(const stsim_results *results, const stsim_experiment *config,
                                         const char *path)
{
    STSIM_REQUIRE(results);
    STSIM_REQUIRE(config);
    STSIM_REQUIRE(path);
    return guarded(
        [&] { stsim::write_summary_json(stsim::summarize(results->records), config->config, std::string(path)); });
}

stsim_status stsim_synthesize(const stsim_experiment *config, stsim_synthesis **out)
{
    STSIM_REQUIRE(config);
    STSIM_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new stsim_synthesis{stsim::synthesize(config->config)}; });
}

void stsim_synthesis_destroy(stsim_synthesis *synthesis) { delete synthesis; }

stsim_status stsim_synthesis_objective_db(const stsim_synthesis *synthesis, double *out)
{
    STSIM_REQUIRE(synthesis);
    STSIM_REQUIRE(out);
    *out = synthesis->run.objective_db;
    return STSIM_OK;
}

stsim_status stsim_synthesis_iterations(const stsim_synthesis *synthesis, int *out)
{
    STSIM_REQUIRE(synthesis);
    STSIM_REQUIRE(out);
    *out = synthesis->run.state.iteration;
    return STSIM_OK;
}

stsim_status stsim_synthesis_radiated_power_ratio(const stsim_synthesis *synthesis, double *out)
{
    STSIM_REQUIRE(synthesis);
    STSIM_REQUIRE(out);
    *out = synthesis->run.radiated_power_ratio;
    return STSIM_OK;
}

stsim_status stsim_synthesis_write_trace(const stsim_synthesis *synthesis, const char *path)
{
    STSIM_REQUIRE(synthesis);
    STSIM_REQUIRE(path);
    return guarded([&] {
        std::ofstream f(path);
        if (!f)
            throw std::ios_base::failure(std::string("cannot open '") + path + "' for writing");
        stsim::write_trace_csv(synthesis->run.state, synthesis->run.target, f);
        if (!f)
            throw std::ios_base::failure(std::string("write to '") + path + "' failed");
    });
}

stsim_status stsim_synthesis_stack_json(const stsim_synthesis *synthesis, char **out_json)
{
    STSIM_REQUIRE(synthesis);
    STSIM_REQUIRE(out_json);
    *out_json = nullptr;
    return guarded([&] { *out_json = dup(stsim::to_json(synthesis->run.stack).dump(2)); });
}

stsim_status stsim_rs_kernel(double distance, double wavelength, double element_area, double separation,
                             double *out_re, double *out_im)
{
    STSIM_REQUIRE(out_re);
    STSIM_REQUIRE(out_im);
    return guarded([&] {
        stsim::KernelParams p{wavelength, element_area, separation};
        p.validate();
        stsim::cdouble k = stsim::rs_kernel(distance, p);
        *out_re = k.real();
        *out_im = k.imag();
    });
}

stsim_status stsim_overhead(int n, int m, int u, int v, double eta_feedback, stsim_overhead_counts *out)
{
    STSIM_REQUIRE(out);
    return guarded([&] {
        stsim::Overhead o = stsim::overhead(n, m, u, v, eta_feedback);
        out->train_partial = o.train_partial;
        out->train_full = o.train_full;
        out->feed_partial = o.feed_partial;
        out->feed_full = o.feed_full;
        out->slots_within_budget = o.slots_within_budget ? 1 : 0;
    });
}

} // extern "C"
