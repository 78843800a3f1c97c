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

#ifndef XLRIS_CONFIG_HPP
#define XLRIS_CONFIG_HPP

#include "xlris/types.hpp"

#include <cstdint>
#include <string>

namespace xlris
{
    struct PolarPosition
    {
        double range = 1.0;   // m, > 0
        double azimuth = 0.0; // rad, measured from the x-axis on the xy-plane

        double x() const { return range * std::cos(azimuth); }
        double y() const { return range * std::sin(azimuth); }
    };

    struct Tolerances
    {
        double ao_eps = 1e-3;
        int ao_max_iter = 30;
        double wmmse_eps = 1e-4;
        int wmmse_max_iter = 100;
        double bisection_rel_tol = 1e-10;
        double hybrid_eps = 1e-4;
        int hybrid_max_iter = 30;
        double mo_eps = 1e-6;
        int mo_max_iter = 200;
        double admm_eps = 1e-4;
        int admm_max_iter = 300;
        double admm_rho = 1.0;
        double admm_dual_step = 1.0; // dual ascent step = admm_dual_step * rho
    };

    struct SystemConfig
    {
        int m_a = 64;      // Alice antennas
        int m_b = 4;       // Bob antennas
        int m_w = 4;       // Willie antennas
        int m_rf = 4;      // Alice RF chains
        int streams = 2;   // data streams L
        int n_y = 90;      // RIS columns along y
        int n_z = 8;       // RIS rows along z
        int n_c = 5;       // clusters
        int n_ray = 10;    // rays per cluster
        double freq_hz = 28e9;
        double sigma_b2_dbm = -110.0;
        double sigma_w2_dbm = -110.0;
        double rho_db = 3.0;
        double kappa = 0.01;
        double p_max_dbm = 40.0;
        double d_a_lambda = 0.5; // Alice ULA spacing in wavelengths
        double d_x_lambda = 0.5; // RIS and receiver spacing in wavelengths
        double angle_spread_deg = 5.0;
        PolarPosition alice{50.0, -pi / 4.0};
        PolarPosition bob{15.0, pi / 4.0};
        PolarPosition willie{10.0, pi / 4.0};
        Tolerances tol;
        std::uint64_t seed = 1;
        int realizations = 100;

        int n() const { return n_y * n_z; }
        double lambda() const { return speed_of_light / freq_hz; }
        double d_ris() const { return d_x_lambda * lambda(); }
        double d_alice() const { return d_a_lambda * lambda(); }
        double sigma_b2() const { return dbm_to_watt(sigma_b2_dbm); }
        double sigma_w2() const { return dbm_to_watt(sigma_w2_dbm); }
        double p_max() const { return dbm_to_watt(p_max_dbm); }
        double rho() const { return db_to_linear(rho_db); }

        // Throws ConfigError naming the violated field
        void validate() const;
    };

    // Reduces the RIS to 30 x 8 elements and the realization count to 10
    void apply_desk_scale(SystemConfig &cfg);

    // Flat JSON object text; unknown keys are rejected
    SystemConfig config_from_json(const std::string &text);
    std::string config_to_json(const SystemConfig &cfg);
    SystemConfig load_config(const std::string &path);

    // Sets one key from a JSON scalar literal, validates afterwards
    void config_set(SystemConfig &cfg, const std::string &key, const std::string &json_value);

    // Stable 64-bit FNV-1a hash of the canonical JSON text
    std::uint64_t config_hash(const SystemConfig &cfg);

    // Deterministic per-run seed from a master seed and stream indices
    std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);
}

#endif
