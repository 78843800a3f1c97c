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

#ifndef XLRIS_WMMSE_HPP
#define XLRIS_WMMSE_HPP

#include "xlris/types.hpp"

#include <vector>

namespace xlris
{
    struct BisectionResult
    {
        CMat W;
        double mu = 0.0;
        double upsilon = 0.0;
        double power = 0.0;
        double leakage = 0.0;
        int evaluations = 0;
    };

    struct WmmseOptions
    {
        double eps = 1e-4;
        int max_iter = 100;
        double bisection_rel_tol = 1e-10;
    };

    struct WmmseResult
    {
        CMat W;   // M_A x L, feasible
        CMat U;   // receive filter at W
        CMat Psi; // weight at W
        double mu = 0.0;
        double upsilon = 0.0;
        double rate = 0.0;
        int iterations = 0;
        bool converged = false;
        std::vector<double> rate_trace;      // after each W update
        std::vector<double> objective_trace; // Tr(Psi E) - ln det Psi after each block update
    };

    // log2 det(I + H W W^H H^H / sigma2)
    double covert_rate(const CMat &H_B, const CMat &W, double sigma2);

    CMat mse_matrix(const CMat &H_B, const CMat &W, const CMat &U, double sigma2);
    CMat receive_filter(const CMat &H_B, const CMat &W, double sigma2);
    CMat weight_matrix(const CMat &E);

    // Tr(Psi E) - ln det Psi
    double wmmse_objective(const CMat &Psi, const CMat &E);

    // (H_B^H U Psi U^H H_B + mu I + upsilon H_W^H H_W)^+ H_B^H U Psi
    CMat wfd_closed_form(const CMat &H_B, const CMat &H_W, const CMat &U, const CMat &Psi, double mu, double upsilon);

    // Dual bisection for power <= p_max and ||H_W W||^2 <= p_leak; p_leak == 0 restricts W to null(H_W)
    BisectionResult bisection_solve(const CMat &H_B, const CMat &H_W, const CMat &U, const CMat &Psi, double p_max,
                                    double p_leak, double rel_tol = 1e-10);

    // Alternating U, Psi, W updates from W_init (scaled into the feasible set first)
    WmmseResult wmmse_fully_digital(const CMat &H_B, const CMat &H_W, double sigma2, double p_max, double p_leak,
                                    const CMat &W_init, const WmmseOptions &opt = {});

    // Top-L right singular vectors of H_B scaled to be feasible
    CMat wmmse_default_init(const CMat &H_B, const CMat &H_W, int streams, double p_max, double p_leak);
}

#endif
