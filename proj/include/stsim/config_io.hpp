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

#ifndef STSIM_CONFIG_IO_HPP
#define STSIM_CONFIG_IO_HPP

#include "stsim/experiment.hpp"

#include <json.hpp>

// JSON mapping of the configuration types. Parsers reject unknown fields and
// report every problem in a single ConfigError.
namespace stsim
{
    nlohmann::json to_json(const StackConfig &config);
    StackConfig stack_config_from_json(const nlohmann::json &j);

    nlohmann::json to_json(const DownlinkScenario &scenario);
    DownlinkScenario scenario_from_json(const nlohmann::json &j, const DownlinkScenario &base = {});

    nlohmann::json to_json(const PgdConfig &config);
    PgdConfig pgd_config_from_json(const nlohmann::json &j, const PgdConfig &base = {});

    // Every field is written, defaults included
    nlohmann::json to_json(const ExperimentConfig &config);
    // Missing fields fall back to the preset named by "experiment" (or custom defaults)
    ExperimentConfig experiment_from_json(const nlohmann::json &j);
    ExperimentConfig experiment_from_json_text(const std::string &text);
    ExperimentConfig load_experiment(const std::string &path);
}

#endif
