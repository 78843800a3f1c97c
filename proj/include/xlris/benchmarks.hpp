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

#ifndef XLRIS_BENCHMARKS_HPP
#define XLRIS_BENCHMARKS_HPP

#include "xlris/channel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace xlris
{
    enum class Scheme
    {
        Proposed,
        FD,
        RP,
        FF,
        ZF
    };

    std::string scheme_name(Scheme s);
    std::optional<Scheme> scheme_from_name(const std::string &name);

    // Phases uniform on (0, 2 pi]
    CVec random_phase_v(Rng &rng, Eigen::Index n);

    struct ZfResult
    {
        CMat W;
        bool degenerate = false;
    };

    // sqrt(P) (I - H_W^+ H_W) V_L / ||.||_F with V_L the top-L right singular vectors of H_B
    ZfResult zf_beamformer(const CMat &H_B, const CMat &H_W, double p_max, int streams);

    struct SumPathGainResult
    {
        CVec v;
        std::vector<double> objective_trace;
        int iterations = 0;
    };

    // Projected gradient ascent of ||H diag(v) G W||_F^2 over unit-modulus v
    SumPathGainResult sum_path_gain_ris(const CMat &H, const CMat &G, const CMat &W, const CVec &v_init,
                                        int max_iter = 500, double rel_tol = 1e-9);
    SumPathGainResult sum_path_gain_ris(const ChannelSet &ch, const CMat &W_RF, const CMat &W_BB, const CVec &v_init);

    // H and F replaced by rank-1 far-field receiver channels; G unchanged
    ChannelSet far_field_scenario(const SystemConfig &cfg, const ChannelSet &ch);
}

#endif
