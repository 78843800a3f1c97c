// SPDX-License-Identifier: Apache-2.0
//
// xlris - near-field XL-RIS covert communication design toolkit
// Copyright (C) 2026 The xlris authors
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

#ifndef XLRIS_TYPES_HPP
#define XLRIS_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace xlris
{
    using cd = std::complex<double>;
    using CMat = Eigen::MatrixXcd;
    using CVec = Eigen::VectorXcd;
    using RVec = Eigen::VectorXd;

    constexpr double speed_of_light = 299792458.0; // m/s, exact
    constexpr double pi = 3.14159265358979323846;

    // Error categories; the C API maps each to a distinct status code
    struct ParameterError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };
    struct GeometryError : std::domain_error
    {
        using std::domain_error::domain_error;
    };
    struct NumericError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };
    struct InfeasibleError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };
    struct ConfigError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };
    struct IoError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
}

#endif
