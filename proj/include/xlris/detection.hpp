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

#ifndef XLRIS_DETECTION_HPP
#define XLRIS_DETECTION_HPP

#include "xlris/types.hpp"

namespace xlris
{
    // Warden noise power is log-uniform on [sigma2/rho, rho*sigma2]
    struct NoiseUncertainty
    {
        double sigma2 = 1.0; // nominal noise power, W
        double rho = 2.0;    // linear, > 1
        int m_w = 1;         // warden antennas

        void validate() const;
    };

    // Radiometer with an unbounded number of samples
    struct DetectionReport
    {
        double leakage = 0.0;   // z, W
        double threshold = 0.0; // optimal threshold, W
        double min_dep = 1.0;   // in [0, 1]
        double p_leak = 0.0;    // W
        double kappa = 0.0;
    };

    double noise_pdf(double x, const NoiseUncertainty &u);

    // ||F diag(v) G W||_F^2
    double leakage_power(const CMat &F, const CVec &v, const CMat &G, const CMat &W);
    double leakage_power(const CMat &F, const CVec &v, const CMat &G, const CMat &W_RF, const CMat &W_BB);

    double optimal_threshold(double z, const NoiseUncertainty &u);
    double dep(double gamma, double z, const NoiseUncertainty &u);
    double min_dep(double z, const NoiseUncertainty &u);

    // Largest z with min_dep(z) >= 1 - kappa
    double max_leakage(double kappa, const NoiseUncertainty &u);

    DetectionReport make_report(double z, const NoiseUncertainty &u, double kappa);
}

#endif
