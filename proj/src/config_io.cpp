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

#include "stsim/config_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace stsim
{
    using nlohmann::json;

    namespace
    {
        std::string alignment_name(Alignment a) { return a == Alignment::Centered ? "centered" : "index_aligned"; }

        // Typed field reader for one JSON object. Problems are collected, not
        // thrown, so a document reports every bad field at once.
        class Reader
        {
        public:
            Reader(const json &j, std::string where, std::vector<std::string> &errors)
                : j_(j), where_(std::move(where)), errors_(errors)
            {
                if (!j_.is_object())
                {
                    fail("", "must be a JSON object");
                    ok_ = false;
                }
            }

            // Present and non-null
            bool has(const char *key)
            {
                if (!ok_)
                    return false;
                seen_.insert(key);
                return j_.contains(key) && !j_.at(key).is_null();
            }

            bool present(const char *key)
            {
                if (!ok_)
                    return false;
                seen_.insert(key);
                return j_.contains(key);
            }

            const json &at(const char *key) const { return j_.at(key); }

            void get(const char *key, double &dst)
            {
                if (!has(key))
                    return;
                const json &v = at(key);
                if (!v.is_number())
                    return fail(key, "must be a number");
                dst = v.get<double>();
            }

            void get(const char *key, int &dst)
            {
                if (!has(key))
                    return;
                std::int64_t x = 0;
                if (!integer(at(key), x) || x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
                    return fail(key, "must be an integer");
                dst = static_cast<int>(x);
            }

            void get(const char *key, std::uint64_t &dst)
            {
                if (!has(key))
                    return;
                const json &v = at(key);
                if (v.is_number_unsigned())
                    dst = v.get<std::uint64_t>();
                else if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
                    dst = static_cast<std::uint64_t>(v.get<std::int64_t>());
                else
                    fail(key, "must be a non-negative integer");
            }

            void get(const char *key, bool &dst)
            {
                if (!has(key))
                    return;
                if (!at(key).is_boolean())
                    return fail(key, "must be a boolean");
                dst = at(key).get<bool>();
            }

            void get(const char *key, std::string &dst)
            {
                if (!has(key))
                    return;
                if (!at(key).is_string())
                    return fail(key, "must be a string");
                dst = at(key).get<std::string>();
            }

            void get(const char *key, std::optional<double> &dst)
            {
                if (!present(key))
                    return;
                if (at(key).is_null())
                {
                    dst.reset();
                    return;
                }
                double x = 0;
                get(key, x);
                dst = x;
            }

            void get(const char *key, std::optional<std::uint64_t> &dst)
            {
                if (!present(key))
                    return;
                if (at(key).is_null())
                {
                    dst.reset();
                    return;
                }
                std::uint64_t x = 0;
                get(key, x);
                dst = x;
            }

            void get(const char *key, std::vector<int> &dst)
            {
                if (!has(key))
                    return;
                const json &v = at(key);
                if (!v.is_array())
                    return fail(key, "must be an array of integers");
                std::vector<int> out;
                for (const json &e : v)
                {
                    std::int64_t x = 0;
                    if (!integer(e, x) || x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
                        return fail(key, "must be an array of integers");
                    out.push_back(static_cast<int>(x));
                }
                dst = std::move(out);
            }

            // Enumerations given by name
            template <class T, class Parse>
            void get_enum(const char *key, T &dst, Parse parse)
            {
                if (!has(key))
                    return;
                if (!at(key).is_string())
                    return fail(key, "must be a string");
                try
                {
                    dst = parse(at(key).get<std::string>());
                }
                catch (const std::exception &e)
                {
                    fail(key, e.what());
                }
            }

            void fail(const std::string &key, const std::string &what)
            {
                std::string path = where_;
                if (!key.empty())
                    path += path.empty() ? key : "." + key;
                errors_.push_back((path.empty() ? std::string("document") : path) + ": " + what);
            }

            // Reports keys that no getter asked for
            void finish()
            {
                if (!ok_)
                    return;
                for (const auto &item : j_.items())
                    if (!seen_.count(item.key()))
                        fail(item.key(), "unknown field");
            }

        private:
            static bool integer(const json &v, std::int64_t &out)
            {
                if (v.is_number_integer())
                {
                    if (v.is_number_unsigned() && v.get<std::uint64_t>() > std::uint64_t(INT64_MAX))
                        return false;
                    out = v.get<std::int64_t>();
                    return true;
                }
                if (v.is_number_float())
                {
                    double d = v.get<double>();
                    if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9e15)
                    {
                        out = static_cast<std::int64_t>(d);
                        return true;
                    }
                }
                return false;
            }

            const json &j_;
            std::string where_;
            std::vector<std::string> &errors_;
            std::set<std::string> seen_;
            bool ok_ = true;
        };

        void throw_if(const std::vector<std::string> &errors)
        {
            if (errors.empty())
                return;
            std::string msg = "invalid config document:";
            for (const auto &e : errors)
                msg += "\n  " + e;
            throw ConfigError(msg);
        }

        void read_stack(const json &j, const std::string &where, StackConfig &c, std::vector<std::string> &errors)
        {
            Reader r(j, where, errors);
            r.get("carrier_hz", c.carrier_hz);
            r.get("upa_x", c.upa_x);
            r.get("upa_y", c.upa_y);
            r.get("st_dal_x", c.st_dal_x);
            r.get("st_dal_y", c.st_dal_y);
            r.get("layer_x", c.layer_x);
            r.get("layer_y", c.layer_y);
            r.get("terminal_x", c.terminal_x);
            r.get("terminal_y", c.terminal_y);
            r.get("num_ac", c.num_ac);
            r.get("num_pc", c.num_pc);
            r.get_enum("terminal_kind", c.terminal_kind, layer_kind_from_string);
            if (r.has("layer_kinds"))
            {
                const json &v = r.at("layer_kinds");
                if (!v.is_array())
                    r.fail("layer_kinds", "must be an array of layer kind names");
                else
                {
                    std::vector<LayerKind> kinds;
                    bool good = true;
                    for (const json &e : v)
                    {
                        try
                        {
                            kinds.push_back(layer_kind_from_string(e.get<std::string>()));
                        }
                        catch (const std::exception &ex)
                        {
                            r.fail("layer_kinds", ex.what());
                            good = false;
                            break;
                        }
                    }
                    if (good)
                        c.layer_kinds = std::move(kinds);
                }
            }
            r.get("spacing_wavelengths", c.spacing_wavelengths);
            r.get("layer_separation_wavelengths", c.layer_separation_wavelengths);
            r.get("bs_separation_wavelengths", c.bs_separation_wavelengths);
            r.get("element_area_bs", c.element_area_bs);
            r.get("element_area_meta", c.element_area_meta);
            r.get_enum("alignment", c.alignment, [](const std::string &s) {
                if (s == "index_aligned")
                    return Alignment::IndexAligned;
                if (s == "centered")
                    return Alignment::Centered;
                throw ConfigError("unknown alignment '" + s + "' (expected index_aligned or centered)");
            });
            r.get("alpha_pc", c.alpha_pc);
            r.get("alpha_min_db", c.alpha_min_db);
            r.get("alpha_max_db", c.alpha_max_db);
            r.get("beta", c.beta);
            r.get("ac_phase_seed", c.ac_phase_seed);
            r.finish();
        }

        void read_scenario(const json &j, const std::string &where, DownlinkScenario &s,
                           std::vector<std::string> &errors)
        {
            Reader r(j, where, errors);
            r.get("user_count", s.user_count);
            r.get("slot_count", s.slot_count);
            r.get("bs_height", s.bs_height);
            r.get("inner_radius", s.inner_radius);
            r.get("outer_radius", s.outer_radius);
            r.get("bandwidth_hz", s.bandwidth_hz);
            r.get("tx_power_dbm", s.tx_power_dbm);
            r.get("noise_psd_dbm_hz", s.noise_psd_dbm_hz);
            r.get("pathloss_exponent", s.pathloss_exponent);
            r.get("reference_distance", s.reference_distance);
            r.finish();
        }

        void read_pgd(const json &j, const std::string &where, PgdConfig &p, std::vector<std::string> &errors)
        {
            Reader r(j, where, errors);
            r.get("max_iterations", p.max_iterations);
            r.get("relative_tolerance", p.relative_tolerance);
            r.get("backtracking_contraction", p.backtracking_contraction);
            r.get("armijo_constant", p.armijo_constant);
            r.get("initial_step", p.initial_step);
            r.get("max_backtracks", p.max_backtracks);
            r.finish();
        }
    }

    json to_json(const StackConfig &c)
    {
        json j;
        j["carrier_hz"] = c.carrier_hz;
        j["upa_x"] = c.upa_x;
        j["upa_y"] = c.upa_y;
        j["st_dal_x"] = c.st_dal_x;
        j["st_dal_y"] = c.st_dal_y;
        j["layer_x"] = c.layer_x;
        j["layer_y"] = c.layer_y;
        j["terminal_x"] = c.terminal_x;
        j["terminal_y"] = c.terminal_y;
        j["num_ac"] = c.num_ac;
        j["num_pc"] = c.num_pc;
        j["terminal_kind"] = to_string(c.terminal_kind);
        j["layer_kinds"] = json::array();
        for (LayerKind k : c.layer_kinds)
            j["layer_kinds"].push_back(to_string(k));
        j["spacing_wavelengths"] = c.spacing_wavelengths;
        j["layer_separation_wavelengths"] = c.layer_separation_wavelengths;
        j["bs_separation_wavelengths"] = c.bs_separation_wavelengths;
        j["element_area_bs"] = c.element_area_bs ? json(*c.element_area_bs) : json();
        j["element_area_meta"] = c.element_area_meta ? json(*c.element_area_meta) : json();
        j["alignment"] = alignment_name(c.alignment);
        j["alpha_pc"] = c.alpha_pc;
        j["alpha_min_db"] = c.alpha_min_db;
        j["alpha_max_db"] = c.alpha_max_db;
        j["beta"] = c.beta;
        j["ac_phase_seed"] = c.ac_phase_seed ? json(*c.ac_phase_seed) : json();
        return j;
    }

    StackConfig stack_config_from_json(const json &j)
    {
        std::vector<std::string> errors;
        StackConfig c;
        read_stack(j, "", c, errors);
        throw_if(errors);
        return c;
    }

    json to_json(const DownlinkScenario &s)
    {
        json j;
        j["user_count"] = s.user_count;
        j["slot_count"] = s.slot_count;
        j["bs_height"] = s.bs_height;
        j["inner_radius"] = s.inner_radius;
        j["outer_radius"] = s.outer_radius;
        j["bandwidth_hz"] = s.bandwidth_hz;
        j["tx_power_dbm"] = s.tx_power_dbm;
        j["noise_psd_dbm_hz"] = s.noise_psd_dbm_hz;
        j["pathloss_exponent"] = s.pathloss_exponent;
        j["reference_distance"] = s.reference_distance;
        return j;
    }

    DownlinkScenario scenario_from_json(const json &j, const DownlinkScenario &base)
    {
        std::vector<std::string> errors;
        DownlinkScenario s = base;
        read_scenario(j, "", s, errors);
        throw_if(errors);
        return s;
    }

    json to_json(const PgdConfig &p)
    {
        json j;
        j["max_iterations"] = p.max_iterations;
        j["relative_tolerance"] = p.relative_tolerance;
        j["backtracking_contraction"] = p.backtracking_contraction;
        j["armijo_constant"] = p.armijo_constant;
        j["initial_step"] = p.initial_step;
        j["max_backtracks"] = p.max_backtracks;
        return j;
    }

    PgdConfig pgd_config_from_json(const json &j, const PgdConfig &base)
    {
        std::vector<std::string> errors;
        PgdConfig p = base;
        read_pgd(j, "", p, errors);
        throw_if(errors);
        return p;
    }

    json to_json(const ExperimentConfig &c)
    {
        json j;
        j["kind"] = to_string(c.kind);
        j["label"] = c.label;
        j["stack"] = to_json(c.stack);
        j["scenario"] = to_json(c.scenario);
        j["pgd"] = to_json(c.pgd);
        j["sweep"] = {{"Q", c.sweep.q}, {"L_pc", c.sweep.l_pc}, {"U", c.sweep.u}, {"M", c.sweep.m}};
        j["trials"] = c.trials;
        j["master_seed"] = c.master_seed;
        j["output"] = c.output;
        j["summary_output"] = c.summary_output;
        j["fairness_variant"] = to_string(c.fairness_variant);
        j["fairness_normalized"] = c.fairness_normalized;
        j["eta_feedback"] = c.eta_feedback;
        j["scale"] = c.scale;
        j["threads"] = c.threads;
        j["evaluate_downlink"] = c.evaluate_downlink;
        return j;
    }

    ExperimentConfig experiment_from_json(const json &j)
    {
        std::vector<std::string> errors;
        ExperimentConfig c;
        Reader r(j, "", errors);
        std::string base = "custom";
        r.get("preset", base);
        try
        {
            c = preset(base);
        }
        catch (const std::exception &e)
        {
            r.fail("preset", e.what());
        }
        r.get_enum("kind", c.kind, experiment_kind_from_string);
        r.get("label", c.label);
        if (r.has("stack"))
            read_stack(r.at("stack"), "stack", c.stack, errors);
        if (r.has("scenario"))
            read_scenario(r.at("scenario"), "scenario", c.scenario, errors);
        if (r.has("pgd"))
            read_pgd(r.at("pgd"), "pgd", c.pgd, errors);
        if (r.has("sweep"))
        {
            Reader s(r.at("sweep"), "sweep", errors);
            s.get("Q", c.sweep.q);
            s.get("L_pc", c.sweep.l_pc);
            s.get("U", c.sweep.u);
            s.get("M", c.sweep.m);
            s.finish();
        }
        r.get("trials", c.trials);
        r.get("master_seed", c.master_seed);
        r.get("output", c.output);
        r.get("summary_output", c.summary_output);
        r.get_enum("fairness_variant", c.fairness_variant, fairness_variant_from_string);
        r.get("fairness_normalized", c.fairness_normalized);
        r.get("eta_feedback", c.eta_feedback);
        r.get("scale", c.scale);
        r.get("threads", c.threads);
        r.get("evaluate_downlink", c.evaluate_downlink);
        r.finish();
        throw_if(errors);
        return c;
    }

    ExperimentConfig experiment_from_json_text(const std::string &text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        return experiment_from_json(j);
    }

    ExperimentConfig load_experiment(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw std::ios_base::failure("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return experiment_from_json_text(ss.str());
    }
}
