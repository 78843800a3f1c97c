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

#include "xlris/hybrid.hpp"
#include "xlris/linalg.hpp"

#include <limits>

namespace xlris
{
    namespace
    {
        CMat as_matrix(const CVec &w, Eigen::Index rows)
        {
            return Eigen::Map<const CMat>(w.data(), rows, w.size() / rows);
        }

        CVec as_vector(const CMat &W)
        {
            return Eigen::Map<const CVec>(W.data(), W.size());
        }

        double re_inner(const CVec &a, const CVec &b) { return a.dot(b).real(); } // Re(a^H b)
    }

    BasebandResult baseband_ls(const CMat &W_RF, const CMat &W_FD)
    {
        if (W_RF.rows() != W_FD.rows())
            throw ParameterError("baseband_ls: dimension mismatch");
        BasebandResult r;
        Eigen::ColPivHouseholderQR<CMat> qr(W_RF);
        qr.setThreshold(1e-12);
        if (qr.rank() == W_RF.cols())
            r.W_BB = qr.solve(W_FD);
        else
        {
            r.rank_deficient = true;
            r.W_BB = W_RF.completeOrthogonalDecomposition().solve(W_FD);
        }
        return r;
    }

    double hybrid_objective(const CVec &w_vec, const CMat &W_BB, const CMat &W_FD)
    {
        return (W_FD - as_matrix(w_vec, W_FD.rows()) * W_BB).squaredNorm();
    }

    CVec euclidean_gradient(const CVec &w_vec, const CMat &W_BB, const CMat &W_FD)
    {
        if (w_vec.size() != W_FD.rows() * W_BB.rows())
            throw ParameterError("euclidean_gradient: dimension mismatch");
        CMat R = as_matrix(w_vec, W_FD.rows()) * W_BB - W_FD;
        return as_vector(2.0 * R * W_BB.adjoint());
    }

    CVec riemannian_gradient(const CVec &w_vec, const CVec &eucl_grad)
    {
        CVec radial = (eucl_grad.array() * w_vec.array().conjugate()).real().cast<cd>();
        return eucl_grad - CVec(radial.array() * w_vec.array());
    }

    CVec vector_transport(const CVec &d_prev, const CVec &w_vec) { return riemannian_gradient(w_vec, d_prev); }

    CVec retract(const CVec &w_vec, const CVec &direction, double tau)
    {
        CVec out(w_vec.size());
        for (Eigen::Index i = 0; i < w_vec.size(); ++i)
        {
            const cd z = w_vec(i) + tau * direction(i);
            const double a = std::abs(z);
            out(i) = (a > 0.0) ? z / a : w_vec(i);
        }
        return out;
    }

    MoResult mo_analog(const CMat &W_FD, const CMat &W_BB, const CMat &W_RF_init, const MoOptions &opt)
    {
        if (W_RF_init.rows() != W_FD.rows() || W_RF_init.cols() != W_BB.rows() || W_BB.cols() != W_FD.cols())
            throw ParameterError("mo_analog: dimension mismatch");
        const Eigen::Index m_a = W_FD.rows();
        MoResult res;
        // Objective scaled by the inverse Hessian bound so that a unit step is natural
        const double lip = 2.0 * std::max(lambda_max_gram(W_BB), 0.0);
        if (!(lip > 0.0))
        {
            res.W_RF = W_RF_init;
            res.objective_trace.push_back(W_FD.squaredNorm());
            res.grad_norm_trace.push_back(0.0);
            return res;
        }
        const double scale = 1.0 / lip;
        auto f = [&](const CVec &w) { return scale * hybrid_objective(w, W_BB, W_FD); };
        auto rgrad = [&](const CVec &w) { return CVec(scale * riemannian_gradient(w, euclidean_gradient(w, W_BB, W_FD))); };

        CVec w = as_vector(W_RF_init);
        double fw = f(w);
        CVec g = rgrad(w);
        CVec d = -g;
        res.objective_trace.push_back(fw / scale);
        res.grad_norm_trace.push_back(g.norm() / scale);
        const double c1 = 1e-4;
        for (int k = 1; k <= opt.max_iter; ++k)
        {
            const double gg = g.squaredNorm();
            if (gg <= 1e-30 * std::max(1.0, fw * fw) || fw <= 1e-30)
                break;
            double slope = re_inner(g, d);
            if (slope >= 0.0)
            {
                d = -g;
                slope = -gg;
            }
            double tau = 1.0;
            CVec w_new = retract(w, d, tau);
            double f_new = f(w_new);
            int halvings = 0;
            while (f_new > fw + c1 * tau * slope)
            {
                if (++halvings > 50)
                {
                    res.stalled = true;
                    break;
                }
                tau *= 0.5;
                w_new = retract(w, d, tau);
                f_new = f(w_new);
            }
            if (res.stalled)
                break;
            CVec g_new = rgrad(w_new);
            CVec g_old_t = vector_transport(g, w_new);
            const double beta = std::max(0.0, re_inner(g_new, g_new - g_old_t) / gg);
            d = -g_new + beta * vector_transport(d, w_new);
            const double decrease = fw - f_new;
            w = w_new;
            fw = f_new;
            g = g_new;
            res.iterations = k;
            res.objective_trace.push_back(fw / scale);
            res.grad_norm_trace.push_back(g.norm() / scale);
            if (decrease <= opt.eps * fw)
                break;
        }
        res.W_RF = as_matrix(w, m_a);
        return res;
    }

    HybridPrecoder hybrid_decompose_am(const CMat &W_FD, int m_rf, const HybridOptions &opt);

    CMat hybrid_init(const CMat &W_FD, int m_rf)
    {
        const Eigen::Index m_a = W_FD.rows();
        if (m_rf < 1 || m_rf > m_a)
            throw ParameterError("hybrid_init: requires 1 <= M_RF <= M_A");
        Eigen::JacobiSVD<CMat> svd(W_FD, Eigen::ComputeFullU);
        CMat U = svd.matrixU().leftCols(m_rf);
        CMat W_RF(m_a, m_rf);
        for (Eigen::Index j = 0; j < m_rf; ++j)
            for (Eigen::Index i = 0; i < m_a; ++i)
            {
                const double a = std::abs(U(i, j));
                W_RF(i, j) = (a > 0.0) ? U(i, j) / a : cd(1.0, 0.0);
            }
        return W_RF;
    }

    HybridPrecoder two_phasor_decompose(const CMat &W_FD, int m_rf)
    {
        const Eigen::Index m_a = W_FD.rows(), L = W_FD.cols();
        if (m_rf < 2 * L || m_rf > m_a)
            throw ParameterError("two_phasor_decompose: requires 2L <= M_RF <= M_A");
        HybridPrecoder hp;
        hp.W_RF = CMat::Ones(m_a, m_rf);
        hp.W_BB = CMat::Zero(m_rf, L);
        const double peak = W_FD.cwiseAbs().maxCoeff();
        const double s = 0.5 * peak;
        for (Eigen::Index l = 0; l < L; ++l)
        {
            for (Eigen::Index i = 0; i < m_a; ++i)
            {
                const cd x = s > 0.0 ? W_FD(i, l) / s : cd(0.0);
                const double half = std::acos(std::min(1.0, 0.5 * std::abs(x)));
                const double a = std::arg(x);
                hp.W_RF(i, 2 * l) = std::polar(1.0, a + half);
                hp.W_RF(i, 2 * l + 1) = std::polar(1.0, a - half);
            }
            hp.W_BB(2 * l, l) = s;
            hp.W_BB(2 * l + 1, l) = s;
        }
        hp.residual_trace.push_back((W_FD - hp.W_RF * hp.W_BB).squaredNorm());
        return hp;
    }

    HybridPrecoder hybrid_decompose(const CMat &W_FD, int m_rf, const HybridOptions &opt)
    {
        HybridPrecoder hp = hybrid_decompose_am(W_FD, m_rf, opt);
        if (m_rf >= 2 * W_FD.cols() && m_rf <= W_FD.rows())
        {
            HybridPrecoder exact = two_phasor_decompose(W_FD, m_rf);
            if (exact.residual_trace.back() < hp.residual_trace.back())
            {
                exact.iterations = hp.iterations;
                exact.stalled = hp.stalled;
                exact.residual_trace.insert(exact.residual_trace.begin(), hp.residual_trace.begin(),
                                            hp.residual_trace.end());
                return exact;
            }
        }
        return hp;
    }

    HybridPrecoder hybrid_decompose_am(const CMat &W_FD, int m_rf, const HybridOptions &opt)
    {
        if (m_rf < 1)
            throw ParameterError("hybrid_decompose: M_RF must be >= 1");
        HybridPrecoder hp;
        hp.W_RF = hybrid_init(W_FD, m_rf);
        const double total = W_FD.squaredNorm();
        BasebandResult bb = baseband_ls(hp.W_RF, W_FD);
        hp.W_BB = bb.W_BB;
        hp.rank_deficient = bb.rank_deficient;
        double res_prev = (W_FD - hp.W_RF * hp.W_BB).squaredNorm();
        hp.residual_trace.push_back(res_prev);
        if (total == 0.0)
            return hp;
        for (int t = 1; t <= opt.max_iter; ++t)
        {
            if (res_prev <= 1e-24 * total)
                break;
            MoResult mo = mo_analog(W_FD, hp.W_BB, hp.W_RF, opt.mo);
            hp.stalled = hp.stalled || mo.stalled;
            BasebandResult nb = baseband_ls(mo.W_RF, W_FD);
            const double res = (W_FD - mo.W_RF * nb.W_BB).squaredNorm();
            hp.iterations = t;
            if (res > res_prev)
                break; // keeps the residual sequence nonincreasing
            hp.W_RF = mo.W_RF;
            hp.W_BB = nb.W_BB;
            hp.rank_deficient = nb.rank_deficient;
            hp.residual_trace.push_back(res);
            const bool ratio_done = res / res_prev < opt.eps;
            const bool stagnant = res_prev - res <= 1e-12 * res_prev;
            res_prev = res;
            if (ratio_done || stagnant)
                break;
        }
        return hp;
    }
}
