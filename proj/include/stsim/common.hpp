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

#ifndef STSIM_COMMON_HPP
#define STSIM_COMMON_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace stsim
{
    using cdouble = std::complex<double>;
    using cmat = Eigen::MatrixXcd;
    using cvec = Eigen::VectorXcd;
    using rmat = Eigen::MatrixXd;
    using rvec = Eigen::VectorXd;

    inline constexpr double kPi = 3.14159265358979323846;
    inline constexpr double kTwoPi = 2.0 * kPi;
    inline constexpr double kSpeedOfLight = 3.0e8; // m/s

    // Error hierarchy. The C API maps each class onto one status code.
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class IndexError : public std::out_of_range
    {
    public:
        using std::out_of_range::out_of_range;
    };

    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Valid arguments used in the wrong combination (e.g. phase gradient of an AC layer)
    class UsageError : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    class NumericError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
    inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
}

#endif
