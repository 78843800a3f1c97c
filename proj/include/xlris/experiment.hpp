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

#ifndef XLRIS_EXPERIMENT_HPP
#define XLRIS_EXPERIMENT_HPP

#include "xlris/analysis.hpp"
#include "xlris/orchestrator.hpp"

#include <string>
#include <vector>

namespace xlris
{
    // kappa, xi (= 1 - kappa), n_y, p_max_dbm, willie_range_m, willie_azimuth_rad, bob_range_m, m_a, m_b, rho_db
    const std::vector<std::string> &sweepable_parameters();

    struct SweepSpec
    {
        std::string parameter; // empty: single point at the config values
        std::vector<double> values;
        std::vector<Scheme> schemes{Scheme::Proposed, Scheme::ZF, Scheme::RP, Scheme::FF, Scheme::FD};
        int jobs = 1;

        void validate() const;
    };

    // "PARAM=v1,v2,..."
    SweepSpec parse_sweep(const std::string &text);
    std::vector<Scheme> parse_schemes(const std::string &text);

    // Returns a copy with the sweep parameter set, validated
    SystemConfig apply_sweep_value(const SystemConfig &cfg, const std::string &parameter, double value);

    struct ResultRow
    {
        Scheme scheme = Scheme::Proposed;
        std::string sweep_param;
        double sweep_value = 0.0;
        int realization = 0;
        std::uint64_t seed = 0;
        std::uint64_t config_hash = 0;
        double rate = 0.0;
        double leakage = 0.0;
        double min_dep = 0.0;
        int iterations = 0;
        std::string status; // "ok" or the failure category
        std::string message;
        double wall_seconds = 0.0;
    };

    struct AggregateRow
    {
        Scheme scheme = Scheme::Proposed;
        std::string sweep_param;
        double sweep_value = 0.0;
        int successes = 0;
        int failures = 0;
        double mean_rate = 0.0;
        double mean_leakage = 0.0;
        double mean_min_dep = 0.0;
        double mean_iterations = 0.0;
    };

    struct SweepResult
    {
        std::vector<ResultRow> rows; // ordered by sweep value, realization, scheme
        std::vector<AggregateRow> aggregates;
    };

    // One channel draw per (sweep value, realization) shared by all schemes; output independent of jobs
    SweepResult run_sweep(const SystemConfig &cfg, const SweepSpec &spec);
    std::vector<AggregateRow> aggregate(const std::vector<ResultRow> &rows);

    // results.csv, aggregate.csv, timing.csv; the first two depend only on config and seeds
    void write_sweep_outputs(const SweepResult &res, const std::string &out_dir);

    // Largest feasible scaling of W toward power and covertness limits, then the covert rate
    double feasible_rate(const Problem &prob, const CVec &v, CMat &W);

    struct HeatmapRun
    {
        std::string preset;
        HeatmapGrid grid;
        double rate = 0.0; // covert rate of the preset beam at Bob after feasibility scaling
        CVec v;
        CMat W;
        ChannelSet channels;
    };

    const std::vector<std::string> &heatmap_presets();

    // steering: far-field receivers, phase-aligned surface with MRT;
    // focusing: single-point focusing beam at Bob; diffraction: proposed design
    HeatmapRun run_heatmap(const SystemConfig &cfg, const std::string &preset, const GridSpec &grid = {},
                           int jobs = 1);
}

#endif
