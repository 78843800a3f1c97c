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

#include "xlris/benchmarks.hpp"
#include "xlris/linalg.hpp"
#include "xlris/ris.hpp"

namespace xlris
{
    std::string scheme_name(Scheme s)
    {
        switch (s)
        {
        case Scheme::Proposed: return "proposed";
        case Scheme::FD: return "fd";
        case Scheme::RP: return "rp";
        case Scheme::FF: return "ff";
        case Scheme::ZF: return "zf";
        }
        return "unknown";
    }

    std::optional<Scheme> scheme_from_name(const std::string &name)
    {
        for (Scheme s : {Scheme::Proposed, Scheme::FD, Scheme::RP, Scheme::FF, Scheme::ZF})
            if (scheme_name(s) == name)
                return s;
        return std::nullopt;
    }

    CVec random_phase_v(Rng &rng, Eigen::Index n)
    {
        std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
        CVec v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = std::polar(1.0, 2.0 * pi - u(rng)); // maps [0, 2pi) onto (0, 2pi]
        return v;
    }

    ZfResult zf_beamformer(const CMat &H_B, const CMat &H_W, double p_max, int streams)
    {
        if (H_B.cols() != H_W.cols() || streams < 1)
            throw ParameterError("zf_beamformer: dimension mismatch");
        const Eigen::Index m_a = H_B.cols();
        Eigen::JacobiSVD<CMat> svd(H_B, Eigen::ComputeFullV);
        CMat Wt = svd.matrixV().leftCols(std::min<Eigen::Index>(streams, m_a));
        CMat P = CMat::Identity(m_a, m_a);
        if (H_W.size() && H_W.cwiseAbs().maxCoeff() > 0.0)
        {
            CMat Qw = range_basis(H_W.adjoint());
            P -= Qw * Qw.adjoint();
        }
        CMat W = P * Wt;
        ZfResult r;
        const double nrm = W.norm();
        if (nrm <= 1e-12 * std::max(1.0, Wt.norm()))
        {
            r.W = CMat::Zero(m_a, streams);
            r.degenerate = true;
            return r;
        }
        r.W = std::sqrt(p_max) * W / nrm;
        if (r.W.cols() < streams)
        {
            r.W.conservativeResize(m_a, streams);
            r.W.rightCols(streams - m_a).setZero();
        }
        return r;
    }

    SumPathGainResult sum_path_gain_ris(const CMat &H, const CMat &G, const CMat &W, const CVec &v_init,
                                        int max_iter, double rel_tol)
    {
        if (H.cols() != G.rows() || G.cols() != W.rows() || v_init.size() != G.rows())
            throw ParameterError("sum_path_gain_ris: dimension mismatch");
        // Objective v^H (H^H H o (G W W^H G^H)^T) v = ||M^H v||^2
        const CMat M = hadamard_factor(H.adjoint(), G * W);
        auto f = [&](const CVec &v) { return (M.adjoint() * v).squaredNorm(); };
        const double lmax = lambda_max_gram(M);
        SumPathGainResult res;
        res.v = unit_phases(v_init);
        double fv = f(res.v);
        res.objective_trace.push_back(fv);
        if (!(lmax > 0.0))
            return res;
        for (int k = 1; k <= max_iter; ++k)
        {
            const CVec g = 2.0 * (M * (M.adjoint() * res.v));
            double tau = 1.0 / lmax;
            CVec v_new = unit_phases(res.v + tau * g);
            double f_new = f(v_new);
            int halvings = 0;
            // Armijo sufficient increase along the projected step
            while (f_new < fv + 1e-4 * (g.dot(v_new - res.v)).real() && halvings < 50)
            {
                tau *= 0.5;
                v_new = unit_phases(res.v + tau * g);
                f_new = f(v_new);
                ++halvings;
            }
            if (f_new < fv)
                break;
            const double gain = f_new - fv;
            res.v = v_new;
            fv = f_new;
            res.objective_trace.push_back(fv);
            res.iterations = k;
            if (gain <= rel_tol * fv)
                break;
        }
        return res;
    }

    SumPathGainResult sum_path_gain_ris(const ChannelSet &ch, const CMat &W_RF, const CMat &W_BB, const CVec &v_init)
    {
        return sum_path_gain_ris(ch.H, ch.G, CMat(W_RF * W_BB), v_init);
    }

    ChannelSet far_field_scenario(const SystemConfig &cfg, const ChannelSet &ch)
    {
        ChannelSet out = ch;
        out.H = far_field_receiver_channel(ch.ris, cfg.bob, cfg.m_b, cfg.freq_hz, ch.rx_spacing);
        out.F = far_field_receiver_channel(ch.ris, cfg.willie, cfg.m_w, cfg.freq_hz, ch.rx_spacing);
        out.far_field_receivers = true;
        return out;
    }
}
