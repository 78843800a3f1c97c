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

#include "xlris/detection.hpp"

#include <algorithm>

namespace xlris
{
    void NoiseUncertainty::validate() const
    {
        if (!(rho > 1.0) || !(sigma2 > 0.0) || m_w < 1)
            throw ParameterError("NoiseUncertainty: requires rho > 1, sigma2 > 0, m_w >= 1");
    }

    double noise_pdf(double x, const NoiseUncertainty &u)
    {
        if (x < u.sigma2 / u.rho || x > u.rho * u.sigma2)
            return 0.0;
        return 1.0 / (2.0 * std::log(u.rho) * x);
    }

    double leakage_power(const CMat &F, const CVec &v, const CMat &G, const CMat &W)
    {
        if (F.cols() != v.size() || G.rows() != v.size() || G.cols() != W.rows())
            throw ParameterError("leakage_power: dimension mismatch");
        return (F * v.asDiagonal() * (G * W)).squaredNorm();
    }

    double leakage_power(const CMat &F, const CVec &v, const CMat &G, const CMat &W_RF, const CMat &W_BB)
    {
        if (W_RF.cols() != W_BB.rows())
            throw ParameterError("leakage_power: dimension mismatch");
        return leakage_power(F, v, G, CMat(W_RF * W_BB));
    }

    double optimal_threshold(double z, const NoiseUncertainty &u)
    {
        return std::min(u.m_w * u.sigma2 / u.rho + z, u.rho * u.m_w * u.sigma2);
    }

    double dep(double gamma, double z, const NoiseUncertainty &u)
    {
        const double lo = std::max((gamma - z) / u.m_w, u.sigma2 / u.rho);
        const double hi = std::min(gamma / u.m_w, u.rho * u.sigma2);
        if (!(hi > lo))
            return 1.0;
        const double xi = 1.0 - std::log(hi / lo) / (2.0 * std::log(u.rho));
        return std::clamp(xi, 0.0, 1.0);
    }

    double min_dep(double z, const NoiseUncertainty &u)
    {
        if (z >= u.m_w * u.sigma2 * (u.rho - 1.0 / u.rho))
            return 0.0;
        const double xi = 1.0 - std::log1p(u.rho * z / (u.m_w * u.sigma2)) / (2.0 * std::log(u.rho));
        return std::clamp(xi, 0.0, 1.0);
    }

    double max_leakage(double kappa, const NoiseUncertainty &u)
    {
        if (kappa < 0.0 || kappa >= 1.0)
            throw ParameterError("max_leakage: requires 0 <= kappa < 1");
        const double cap = u.m_w * u.sigma2 * (u.rho - 1.0 / u.rho);
        const double budget = std::expm1(2.0 * kappa * std::log(u.rho)) * u.m_w * u.sigma2 / u.rho;
        return std::min(cap, budget);
    }

    DetectionReport make_report(double z, const NoiseUncertainty &u, double kappa)
    {
        DetectionReport r;
        r.leakage = z;
        r.threshold = optimal_threshold(z, u);
        r.min_dep = min_dep(z, u);
        r.p_leak = max_leakage(kappa, u);
        r.kappa = kappa;
        return r;
    }
}
