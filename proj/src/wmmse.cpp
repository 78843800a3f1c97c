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

#include "xlris/wmmse.hpp"
#include "xlris/linalg.hpp"

#include <algorithm>
#include <limits>

namespace xlris
{
    double covert_rate(const CMat &H_B, const CMat &W, double sigma2)
    {
        if (H_B.cols() != W.rows())
            throw ParameterError("covert_rate: dimension mismatch");
        if (!(sigma2 > 0.0))
            throw ParameterError("covert_rate: sigma2 must be positive");
        CMat HW = H_B * W;
        CMat K = HW.adjoint() * HW / sigma2; // L x L, same nonzero spectrum
        K.diagonal().array() += 1.0;
        return std::max(0.0, log2_det_hpd(K));
    }

    CMat mse_matrix(const CMat &H_B, const CMat &W, const CMat &U, double sigma2)
    {
        if (H_B.cols() != W.rows() || U.rows() != H_B.rows() || U.cols() != W.cols())
            throw ParameterError("mse_matrix: dimension mismatch");
        const Eigen::Index L = W.cols();
        CMat D = CMat::Identity(L, L) - U.adjoint() * H_B * W;
        CMat E = D * D.adjoint() + sigma2 * U.adjoint() * U;
        return 0.5 * (E + E.adjoint());
    }

    CMat receive_filter(const CMat &H_B, const CMat &W, double sigma2)
    {
        if (H_B.cols() != W.rows())
            throw ParameterError("receive_filter: dimension mismatch");
        CMat HW = H_B * W;
        CMat R = HW * HW.adjoint();
        R.diagonal().array() += sigma2;
        Eigen::LLT<CMat> llt(R);
        if (llt.info() != Eigen::Success)
            throw NumericError("receive_filter: singular receive covariance");
        return llt.solve(HW);
    }

    CMat weight_matrix(const CMat &E)
    {
        const Eigen::Index L = E.rows();
        CMat Es = 0.5 * (E + E.adjoint());
        Eigen::LLT<CMat> llt(Es);
        if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().real().minCoeff() > 0.0)
            return llt.solve(CMat::Identity(L, L));
        const double tr = Es.trace().real();
        if (!(tr > 0.0))
            throw NumericError("weight_matrix: MSE matrix is zero");
        Es.diagonal().array() += 1e-12 * tr / double(L);
        Eigen::LLT<CMat> reg(Es);
        if (reg.info() != Eigen::Success)
            throw NumericError("weight_matrix: regularized MSE matrix not positive definite");
        return reg.solve(CMat::Identity(L, L));
    }

    double wmmse_objective(const CMat &Psi, const CMat &E)
    {
        return (Psi * E).trace().real() - std::log(2.0) * log2_det_hpd(Psi);
    }

    CMat wfd_closed_form(const CMat &H_B, const CMat &H_W, const CMat &U, const CMat &Psi, double mu, double upsilon)
    {
        if (mu < 0.0 || upsilon < 0.0)
            throw ParameterError("wfd_closed_form: duals must be non-negative");
        CMat T = H_B.adjoint() * U * Psi;
        CMat A = T * U.adjoint() * H_B + upsilon * H_W.adjoint() * H_W;
        A.diagonal().array() += mu;
        if (A.cwiseAbs().maxCoeff() == 0.0)
            throw NumericError("wfd_closed_form: all-zero system matrix");
        return hermitian_pinv(A) * T;
    }

    namespace
    {
        // Problem restricted to span(rows of H_B, rows of H_W); exact since the
        // right-hand side and both quadratic forms vanish outside that span.
        struct ReducedDual
        {
            CMat Q;   // M_A x r orthonormal
            CMat Z;   // r x r0 admissible directions (identity, or null(H_W) directions)
            CMat Bz;  // r0 x r0
            CMat Cz;  // r0 x r0
            CMat bz;  // r0 x L
            CMat hwz; // M_W x r0
            int evals = 0;

            struct Eval
            {
                CMat x; // r0 x L
                double power;
                double leak;
            };

            ReducedDual(const CMat &H_B, const CMat &H_W, const CMat &U, const CMat &Psi, bool null_mode)
            {
                CMat stacked(H_B.cols(), H_B.rows() + H_W.rows());
                stacked << H_B.adjoint(), H_W.adjoint();
                Q = range_basis(stacked);
                const Eigen::Index r = Q.cols();
                CMat hb = H_B * Q, hw = H_W * Q;
                if (null_mode && r > 0)
                {
                    Eigen::SelfAdjointEigenSolver<CMat> es(hw.adjoint() * hw);
                    const RVec &ev = es.eigenvalues();
                    const double lmax = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
                    std::vector<Eigen::Index> keep;
                    for (Eigen::Index i = 0; i < r; ++i)
                        if (ev(i) <= 1e-12 * lmax)
                            keep.push_back(i);
                    Z.resize(r, Eigen::Index(keep.size()));
                    for (size_t i = 0; i < keep.size(); ++i)
                        Z.col(Eigen::Index(i)) = es.eigenvectors().col(keep[i]);
                }
                else
                    Z = CMat::Identity(r, r);
                CMat hbz = hb * Z;
                hwz = hw * Z;
                bz = hbz.adjoint() * U * Psi;
                Bz = bz * U.adjoint() * hbz;
                Bz = 0.5 * (Bz + Bz.adjoint());
                Cz = hwz.adjoint() * hwz;
            }

            Eval eval(double mu, double ups)
            {
                ++evals;
                const Eigen::Index r0 = Z.cols();
                Eval e;
                if (r0 == 0)
                {
                    e.x = CMat::Zero(0, bz.cols());
                    e.power = e.leak = 0.0;
                    return e;
                }
                CMat M = Bz + ups * Cz;
                M.diagonal().array() += mu;
                bool solved = false;
                if (mu > 0.0)
                {
                    Eigen::LLT<CMat> llt(M);
                    if (llt.info() == Eigen::Success)
                    {
                        e.x = llt.solve(bz);
                        solved = true;
                    }
                }
                if (!solved)
                {
                    if (M.cwiseAbs().maxCoeff() == 0.0)
                        e.x = CMat::Zero(r0, bz.cols());
                    else
                        e.x = hermitian_pinv(M) * bz;
                }
                e.power = e.x.squaredNorm();
                e.leak = (hwz * e.x).squaredNorm();
                return e;
            }
        };
    }

    BisectionResult bisection_solve(const CMat &H_B, const CMat &H_W, const CMat &U, const CMat &Psi, double p_max,
                                    double p_leak, double rel_tol)
    {
        if (!(p_max > 0.0) || p_leak < 0.0)
            throw ParameterError("bisection_solve: requires p_max > 0 and p_leak >= 0");
        if (H_B.cols() != H_W.cols())
            throw ParameterError("bisection_solve: dimension mismatch");
        const bool null_mode = (p_leak == 0.0);
        ReducedDual sys(H_B, H_W, U, Psi, null_mode);

        auto solve_upsilon = [&](double mu, double &ups_out) {
            auto e0 = sys.eval(mu, 0.0);
            ups_out = 0.0;
            if (null_mode || e0.leak <= p_leak)
                return e0;
            const double hw = std::sqrt(sys.Cz.trace().real());
            double hi = sys.bz.norm() / (std::sqrt(p_leak) * std::max(hw, 1e-300));
            if (!(hi > 0.0) || !std::isfinite(hi))
                hi = 1.0;
            auto ehi = sys.eval(mu, hi);
            int doublings = 0;
            while (ehi.leak > p_leak)
            {
                if (++doublings > 60)
                    throw NumericError("bisection_solve: leakage bracket not found after 60 doublings");
                hi *= 2.0;
                ehi = sys.eval(mu, hi);
            }
            double lo = 0.0;
            while (hi - lo > rel_tol * hi)
            {
                const double mid = 0.5 * (lo + hi);
                auto em = sys.eval(mu, mid);
                if (em.leak <= p_leak)
                {
                    hi = mid;
                    ehi = em;
                }
                else
                    lo = mid;
            }
            ups_out = hi;
            return ehi;
        };

        BisectionResult res;
        double ups = 0.0;
        auto e = solve_upsilon(0.0, ups);
        double mu = 0.0;
        if (e.power > p_max)
        {
            double hi = sys.bz.norm() / std::sqrt(p_max);
            if (!(hi > 0.0))
                hi = 1.0;
            double ups_hi = 0.0;
            auto ehi = solve_upsilon(hi, ups_hi);
            int doublings = 0;
            while (ehi.power > p_max)
            {
                if (++doublings > 60)
                    throw NumericError("bisection_solve: power bracket not found after 60 doublings");
                hi *= 2.0;
                ehi = solve_upsilon(hi, ups_hi);
            }
            double lo = 0.0;
            while (hi - lo > rel_tol * hi)
            {
                const double mid = 0.5 * (lo + hi);
                double ups_mid = 0.0;
                auto em = solve_upsilon(mid, ups_mid);
                if (em.power <= p_max)
                {
                    hi = mid;
                    ehi = em;
                    ups_hi = ups_mid;
                }
                else
                    lo = mid;
            }
            mu = hi;
            e = ehi;
            ups = ups_hi;
        }
        res.W = sys.Q * (sys.Z * e.x);
        if (res.W.size() == 0)
            res.W = CMat::Zero(H_B.cols(), U.cols());
        res.mu = mu;
        res.upsilon = null_mode ? std::numeric_limits<double>::infinity() : ups;
        res.power = res.W.squaredNorm();
        res.leakage = (H_W * res.W).squaredNorm();
        res.evaluations = sys.evals;
        return res;
    }

    namespace
    {
        CMat null_project(const CMat &W, const CMat &H_W)
        {
            if (H_W.size() == 0 || H_W.cwiseAbs().maxCoeff() == 0.0)
                return W;
            CMat Qw = range_basis(H_W.adjoint());
            return W - Qw * (Qw.adjoint() * W);
        }

        CMat scale_feasible(CMat W, const CMat &H_W, double p_max, double p_leak)
        {
            if (p_leak == 0.0)
                W = null_project(W, H_W);
            const double pw = W.squaredNorm();
            const double lk = (H_W * W).squaredNorm();
            double s = 1.0;
            if (pw > p_max)
                s = std::min(s, std::sqrt(p_max / pw));
            if (p_leak > 0.0 && lk > p_leak)
                s = std::min(s, std::sqrt(p_leak / lk));
            return W * s;
        }
    }

    CMat wmmse_default_init(const CMat &H_B, const CMat &H_W, int streams, double p_max, double p_leak)
    {
        const Eigen::Index m_a = H_B.cols();
        Eigen::JacobiSVD<CMat> svd(H_B, Eigen::ComputeFullV);
        CMat W = svd.matrixV().leftCols(std::min<Eigen::Index>(streams, m_a));
        if (W.cols() < streams)
            W.conservativeResize(m_a, streams), W.rightCols(streams - m_a).setZero();
        W *= std::sqrt(p_max / double(streams));
        return scale_feasible(W, H_W, p_max, p_leak);
    }

    WmmseResult wmmse_fully_digital(const CMat &H_B, const CMat &H_W, double sigma2, double p_max, double p_leak,
                                    const CMat &W_init, const WmmseOptions &opt)
    {
        if (!(sigma2 > 0.0) || !(p_max > 0.0) || p_leak < 0.0)
            throw ParameterError("wmmse_fully_digital: requires sigma2 > 0, p_max > 0, p_leak >= 0");
        const Eigen::Index m_a = H_B.cols(), L = W_init.cols();
        WmmseResult res;
        if (W_init.rows() != m_a || L < 1)
            throw ParameterError("wmmse_fully_digital: W_init dimension mismatch");
        if (H_B.cwiseAbs().maxCoeff() == 0.0)
        {
            res.W = CMat::Zero(m_a, L);
            res.U = CMat::Zero(H_B.rows(), L);
            res.Psi = CMat::Identity(L, L);
            res.converged = true;
            return res;
        }
        CMat W = scale_feasible(W_init, H_W, p_max, p_leak);
        if (covert_rate(H_B, W, sigma2) <= 0.0)
            W = wmmse_default_init(H_B, H_W, int(L), p_max, p_leak);
        double rate = covert_rate(H_B, W, sigma2);
        for (int t = 1; t <= opt.max_iter; ++t)
        {
            CMat U = receive_filter(H_B, W, sigma2);
            CMat E = mse_matrix(H_B, W, U, sigma2);
            CMat Psi = weight_matrix(E);
            res.objective_trace.push_back(wmmse_objective(Psi, E));
            BisectionResult b = bisection_solve(H_B, H_W, U, Psi, p_max, p_leak, opt.bisection_rel_tol);
            res.objective_trace.push_back(wmmse_objective(Psi, mse_matrix(H_B, b.W, U, sigma2)));
            const double rate_new = covert_rate(H_B, b.W, sigma2);
            res.mu = b.mu;
            res.upsilon = b.upsilon;
            res.iterations = t;
            res.rate_trace.push_back(rate_new);
            const double change = std::abs(rate_new - rate);
            W = b.W;
            rate = rate_new;
            if (change <= opt.eps * std::max(std::abs(rate), 1e-300))
            {
                res.converged = true;
                break;
            }
        }
        res.W = W;
        res.rate = rate;
        res.U = receive_filter(H_B, W, sigma2);
        res.Psi = weight_matrix(mse_matrix(H_B, W, res.U, sigma2));
        return res;
    }
}
