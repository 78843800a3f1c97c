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

#ifndef XLRIS_HYBRID_HPP
#define XLRIS_HYBRID_HPP

#include "xlris/types.hpp"

#include <vector>

namespace xlris
{
    // |W_RF(i,j)| == 1
    struct HybridPrecoder
    {
        CMat W_RF; // M_A x M_RF
        CMat W_BB; // M_RF x L
        double margin = 0.0;
        int iterations = 0;
        bool rank_deficient = false;
        bool stalled = false;
        std::vector<double> residual_trace; // ||W_FD - W_RF W_BB||_F^2 after each round
    };

    struct BasebandResult
    {
        CMat W_BB;
        bool rank_deficient = false;
    };

    struct MoOptions
    {
        double eps = 1e-6; // relative objective decrease
        int max_iter = 200;
    };

    struct MoResult
    {
        CMat W_RF;
        int iterations = 0;
        bool stalled = false;
        std::vector<double> objective_trace;
        std::vector<double> grad_norm_trace;
    };

    struct HybridOptions
    {
        double eps = 1e-4; // residual ratio test
        int max_iter = 30;
        MoOptions mo;
    };

    BasebandResult baseband_ls(const CMat &W_RF, const CMat &W_FD);

    // ||W_FD - W_RF W_BB||_F^2 with W_RF = reshape(w_vec)
    double hybrid_objective(const CVec &w_vec, const CMat &W_BB, const CMat &W_FD);

    // 2 (W_BB^T kron I)^H ((W_BB^T kron I) w - vec W_FD), evaluated as 2 vec((W_RF W_BB - W_FD) W_BB^H)
    CVec euclidean_gradient(const CVec &w_vec, const CMat &W_BB, const CMat &W_FD);

    CVec riemannian_gradient(const CVec &w_vec, const CVec &eucl_grad);
    CVec vector_transport(const CVec &d_prev, const CVec &w_vec);
    CVec retract(const CVec &w_vec, const CVec &direction, double tau);

    // Riemannian conjugate gradient with Armijo backtracking
    MoResult mo_analog(const CMat &W_FD, const CMat &W_BB, const CMat &W_RF_init, const MoOptions &opt = {});

    // Phases of the first M_RF left singular vectors of W_FD
    CMat hybrid_init(const CMat &W_FD, int m_rf);

    // Exact factorization for M_RF >= 2L: each entry of W_FD / s is a sum of two unit phasors
    HybridPrecoder two_phasor_decompose(const CMat &W_FD, int m_rf);

    // Alternating least squares / manifold optimization from the singular-vector phase start
    HybridPrecoder hybrid_decompose_am(const CMat &W_FD, int m_rf, const HybridOptions &opt = {});

    // Alternating minimization; for M_RF >= 2L the exact two-phasor factorization is kept when it fits better
    HybridPrecoder hybrid_decompose(const CMat &W_FD, int m_rf, const HybridOptions &opt = {});
}

#endif
