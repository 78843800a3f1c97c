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

#ifndef XLRIS_ORCHESTRATOR_HPP
#define XLRIS_ORCHESTRATOR_HPP

#include "xlris/benchmarks.hpp"
#include "xlris/channel.hpp"
#include "xlris/detection.hpp"

#include <vector>

namespace xlris
{
    // Physical units throughout (W, W/Hz-normalised gains)
    struct BeamformerState
    {
        CMat W_RF; // M_A x M_RF, unit modulus; empty for fully-digital solutions
        CMat W_BB; // M_RF x L
        CMat W_FD; // last Stage-I output
        CVec v;    // unit modulus

        CMat precoder() const { return W_RF.size() ? CMat(W_RF * W_BB) : W_FD; }
    };

    struct TraceRow
    {
        int iteration = 0;
        double rate = 0.0;    // bits/s/Hz with the deployed precoder
        double rate_fd = 0.0; // Stage-I fully-digital rate
        double leakage = 0.0; // W
        double power = 0.0;   // W
        int wmmse_iterations = 0;
        int hybrid_iterations = 0;
        int admm_iterations = 0;
        double hybrid_residual = 0.0; // relative Frobenius residual
        double admm_primal_residual = 0.0;
        bool stage2_accepted = false;
        bool ris_accepted = false;
        bool margin_rerun = false;
    };

    struct Solution
    {
        Scheme scheme = Scheme::Proposed;
        BeamformerState state;
        double rate = 0.0;
        DetectionReport report;
        std::vector<TraceRow> trace; // row 0 is the feasibility-scaled initial point
        int iterations = 0;
        bool converged = false;
    };

    struct Problem
    {
        ChannelSet ch;
        double sigma_b2 = 1.0;
        double p_max = 1.0;
        double kappa = 0.0;
        double p_leak = 0.0;
        NoiseUncertainty noise;
        int m_rf = 1;
        int streams = 1;
        Tolerances tol;
    };

    Problem make_problem(const SystemConfig &cfg, const ChannelSet &ch);

    BeamformerState init_beamformers(const SystemConfig &cfg, Rng &rng);

    struct AoOptions
    {
        bool skip_hybrid = false; // fully-digital upper bound
        bool fixed_ris = false;   // random-phase benchmark
    };

    Solution alternating_optimization(const Problem &prob, const BeamformerState &init, const AoOptions &opt = {});

    // Zero-forcing precoder with sum-path-gain surface design, hybrid-decomposed
    Solution zero_forcing_scheme(const Problem &prob, const CVec &v_init, int rounds = 5);

    // Recomputes leakage, threshold, minimum DEP and rate from the stored state; throws
    // InfeasibleError naming the violated constraint beyond rel_slack
    struct Evaluation
    {
        DetectionReport report;
        double rate = 0.0;
        double power = 0.0;
    };
    Evaluation evaluate_solution(const Solution &sol, const Problem &prob, double rel_slack = 1e-6);

    // Draws channels from the seed and runs one scheme end to end
    Solution run_scheme(const SystemConfig &cfg, Scheme scheme, std::uint64_t seed);
    Solution run_scheme(const SystemConfig &cfg, const ChannelSet &ch, Scheme scheme, std::uint64_t seed);
}

#endif
