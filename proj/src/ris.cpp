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

#include "xlris/ris.hpp"

#include "xlris/linalg.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace xlris
{
    double RisQuadratics::objective(const CVec &v) const
    {
        return (J.adjoint() * v).squaredNorm() - 2.0 * v.dot(c).real();
    }

    double RisQuadratics::leakage(const CVec &v) const { return (K.adjoint() * v).squaredNorm(); }

    CMat RisQuadratics::xi_dense() const { return Xi.size() ? Xi : CMat(J * J.adjoint()); }
    CMat RisQuadratics::upsilon_dense() const { return Upsilon.size() ? Upsilon : CMat(K * K.adjoint()); }

    CMat hadamard_factor(const CMat &P, const CMat &Q)
    {
        if (P.rows() != Q.rows())
            throw ParameterError("hadamard_factor: row mismatch");
        CMat R(P.rows(), P.cols() * Q.cols());
        for (Eigen::Index a = 0; a < P.cols(); ++a)
            for (Eigen::Index b = 0; b < Q.cols(); ++b)
                R.col(a * Q.cols() + b) = P.col(a).cwiseProduct(Q.col(b).conjugate());
        return R;
    }

    namespace
    {
        // R with Psi = R R^H
        CMat psd_sqrt_factor(const CMat &Psi)
        {
            CMat S = 0.5 * (Psi + Psi.adjoint());
            Eigen::LLT<CMat> llt(S);
            if (llt.info() == Eigen::Success)
                return llt.matrixL();
            Eigen::SelfAdjointEigenSolver<CMat> es(S);
            RVec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
            return es.eigenvectors() * d.asDiagonal();
        }

        CMat factor_from_dense(const CMat &M)
        {
            const Eigen::Index n = M.rows();
            if (n == 0)
                return CMat(0, 0);
            Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (M + M.adjoint()));
            const RVec &ev = es.eigenvalues();
            const double lmax = ev.cwiseAbs().maxCoeff();
            std::vector<Eigen::Index> keep;
            for (Eigen::Index i = 0; i < n; ++i)
                if (ev(i) > 1e-14 * lmax && ev(i) > 0.0)
                    keep.push_back(i);
            CMat J(n, Eigen::Index(keep.size()));
            for (size_t i = 0; i < keep.size(); ++i)
                J.col(Eigen::Index(i)) = es.eigenvectors().col(keep[i]) * std::sqrt(ev(keep[i]));
            return J;
        }
    }

    RisQuadratics build_quadratics(const CMat &H, const CMat &F, const CMat &G, const CMat &U, const CMat &Psi,
                                   const CMat &W_hat, bool with_dense)
    {
        const Eigen::Index n = G.rows();
        if (H.cols() != n || F.cols() != n || U.rows() != H.rows() || G.cols() != W_hat.rows() ||
            U.cols() != Psi.rows() || W_hat.cols() != Psi.cols())
            throw ParameterError("build_quadratics: dimension mismatch");
        RisQuadratics q;
        const CMat Q = G * W_hat;                    // N x L, B = Q Q^H
        const CMat HUPsi = H.adjoint() * U * Psi;    // N x L
        const CMat P = H.adjoint() * U * psd_sqrt_factor(Psi); // A = P P^H
        q.J = hadamard_factor(P, Q);
        q.K = hadamard_factor(F.adjoint(), Q);
        q.c = HUPsi.cwiseProduct(Q.conjugate()).rowwise().sum();
        if (with_dense)
        {
            q.Xi = q.J * q.J.adjoint();
            q.Upsilon = q.K * q.K.adjoint();
        }
        return q;
    }

    RisQuadratics make_quadratics(const CMat &Xi, const CMat &Upsilon, const CVec &c)
    {
        if (Xi.rows() != c.size() || Upsilon.rows() != c.size())
            throw ParameterError("make_quadratics: dimension mismatch");
        RisQuadratics q;
        q.Xi = Xi;
        q.Upsilon = Upsilon;
        q.c = c;
        q.J = factor_from_dense(Xi);
        q.K = factor_from_dense(Upsilon);
        if (q.J.cols() == 0)
            q.J = CMat::Zero(c.size(), 1);
        if (q.K.cols() == 0)
            q.K = CMat::Zero(c.size(), 1);
        return q;
    }

    EllipsoidProjector::EllipsoidProjector(const CMat &K)
    {
        if (K.size() == 0 || K.cwiseAbs().maxCoeff() == 0.0)
        {
            basis_ = CMat(K.rows(), 0);
            eig_ = RVec(0);
            return;
        }
        Eigen::BDCSVD<CMat> svd(K, Eigen::ComputeThinU);
        const RVec &s = svd.singularValues();
        Eigen::Index r = 0;
        while (r < s.size() && s(r) > 1e-12 * s(0))
            ++r;
        basis_ = svd.matrixU().leftCols(r);
        eig_ = s.head(r).cwiseAbs2();
    }

    double EllipsoidProjector::leakage(const CVec &v) const
    {
        if (eig_.size() == 0)
            return 0.0;
        CVec y = basis_.adjoint() * v;
        return (eig_.array() * y.array().abs2()).sum();
    }

    CVec EllipsoidProjector::project(const CVec &v, double p_leak) const
    {
        if (eig_.size() == 0)
            return v;
        const CVec y = basis_.adjoint() * v;
        const RVec y2 = y.array().abs2();
        auto q = [&](double lam) { return (eig_.array() * y2.array() / (1.0 + lam * eig_.array()).square()).sum(); };
        const double q0 = q(0.0);
        if (q0 <= p_leak)
            return v;
        if (p_leak <= 0.0)
            return v - basis_ * y;
        const double ratio = std::sqrt(q0 / p_leak) - 1.0;
        double lo = ratio / eig_.maxCoeff();
        double hi = ratio / eig_.minCoeff();
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (q(mid) <= p_leak)
                hi = mid;
            else
                lo = mid;
        }
        if (!(hi > 0.0))
            hi = std::numeric_limits<double>::min();
        for (int k = 0; k < 200 && q(hi) > p_leak; ++k)
            hi *= 1.0 + std::ldexp(1e-12, std::min(k, 60));
        RVec shrink = (hi * eig_.array() / (1.0 + hi * eig_.array())).matrix();
        return v - basis_ * (shrink.cast<cd>().asDiagonal() * y);
    }

    CVec project_discs(const CVec &v)
    {
        CVec out = v;
        for (Eigen::Index i = 0; i < v.size(); ++i)
        {
            const double a = std::abs(v(i));
            if (a > 1.0)
                out(i) = v(i) / a;
        }
        return out;
    }

    CVec project_ellipsoid(const CVec &v, const CMat &Upsilon, double p_leak)
    {
        if (Upsilon.rows() != v.size() || Upsilon.cols() != v.size())
            throw ParameterError("project_ellipsoid: dimension mismatch");
        CMat K = factor_from_dense(Upsilon);
        return EllipsoidProjector(K).project(v, p_leak);
    }

    CVec project_intersection(const CVec &v, const EllipsoidProjector &ell, double p_leak, int max_iter, double tol)
    {
        CVec d = project_discs(v);
        if (ell.leakage(d) <= p_leak)
            return d;
        CVec e = ell.project(v, p_leak);
        if (e.cwiseAbs().maxCoeff() <= 1.0)
            return e;
        CVec x = v, p = CVec::Zero(v.size()), q = CVec::Zero(v.size());
        CVec y = d;
        for (int k = 0; k < max_iter; ++k)
        {
            y = project_discs(x + p);
            p = x + p - y;
            CVec x_new = ell.project(y + q, p_leak);
            q = y + q - x_new;
            const double change = (x_new - x).norm();
            x = x_new;
            if (change <= tol * (1.0 + x.norm()) && (x - y).norm() <= std::sqrt(tol) * (1.0 + x.norm()))
                break;
        }
        // Both sets are star-shaped about 0: clip, then shrink radially into the ellipsoid
        CVec z = project_discs(x);
        const double lk = ell.leakage(z);
        if (lk > p_leak)
            z *= (p_leak > 0.0) ? std::sqrt(p_leak / lk) * (1.0 - 1e-12) : 0.0;
        return z;
    }

    VUpdateResult v_update(const RisQuadratics &q, const EllipsoidProjector &ell, const CVec &phi, const CVec &dual,
                           double rho, double p_leak, const CVec &v_warm, const VUpdateOptions &opt)
    {
        if (!(rho > 0.0))
            throw ParameterError("v_update: rho must be positive");
        const Eigen::Index n = q.size();
        if (phi.size() != n || dual.size() != n)
            throw ParameterError("v_update: dimension mismatch");
        const CVec z = phi - dual / rho;
        const double lip = 2.0 * lambda_max_gram(q.J) + rho;
        auto grad = [&](const CVec &v) { return CVec(2.0 * (q.J * (q.J.adjoint() * v)) - 2.0 * q.c + rho * (v - z)); };
        auto obj = [&](const CVec &v) { return q.objective(v) + 0.5 * rho * (v - z).squaredNorm(); };
        auto proj = [&](const CVec &v) { return project_intersection(v, ell, p_leak, opt.projection_max_iter); };

        VUpdateResult res;
        CVec v = proj(v_warm.size() == n ? v_warm : z);
        double fv = obj(v);
        CVec y = v;
        double t = 1.0;
        for (int k = 1; k <= opt.max_iter; ++k)
        {
            CVec v_new = proj(y - grad(y) / lip);
            double f_new = obj(v_new);
            if (f_new > fv)
            {
                // Momentum restart from the last iterate
                y = v;
                t = 1.0;
                v_new = proj(v - grad(v) / lip);
                f_new = obj(v_new);
            }
            const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            const double step = (v_new - v).norm();
            y = v_new + ((t - 1.0) / t_new) * (v_new - v);
            t = t_new;
            if (f_new <= fv)
            {
                v = v_new;
                fv = f_new;
            }
            res.iterations = k;
            if (step <= opt.tol * (1.0 + v.norm()))
            {
                res.converged = true;
                break;
            }
        }
        const CVec g = grad(v);
        const CVec gm = lip * (v - proj(v - g / lip));
        const double scale = std::max({1.0, g.norm(), (2.0 * q.c).norm()});
        res.kkt_residual = gm.norm() / scale;
        res.v = v;
        return res;
    }

    VUpdateResult v_update(const RisQuadratics &q, const CVec &phi, const CVec &dual, double rho, double p_leak,
                           const VUpdateOptions &opt)
    {
        EllipsoidProjector ell(q.K);
        return v_update(q, ell, phi, dual, rho, p_leak, CVec(), opt);
    }

    CVec phi_update(const CVec &v, const CVec &dual, double rho, const CVec &phi_prev)
    {
        CVec out(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i)
        {
            const cd s = v(i) + dual(i) / rho;
            const double a = std::abs(s);
            if (a > 0.0)
                out(i) = s / a;
            else
                out(i) = (phi_prev.size() == v.size()) ? phi_prev(i) : cd(1.0, 0.0);
        }
        return out;
    }

    CVec dual_update(const CVec &dual, const CVec &v, const CVec &phi, double rho, double step_factor)
    {
        return dual + step_factor * rho * (v - phi);
    }

    namespace
    {
        struct AdmmRun
        {
            CVec phi;
            double primal = 0.0;
            int iterations = 0;
            bool converged = false;
            std::vector<double> lag, res;
        };

        AdmmRun admm_core(const RisQuadratics &qs, const EllipsoidProjector &ell, double p_target, const CVec &phi0,
                          const AdmmOptions &opt)
        {
            const Eigen::Index n = qs.size();
            AdmmRun run;
            CVec phi = phi0, v = phi0, dual = CVec::Zero(n);
            double rho = opt.rho;
            double lag_prev = std::numeric_limits<double>::quiet_NaN();
            VUpdateOptions vo;
            vo.max_iter = opt.inner_max_iter;
            vo.tol = 1e-8;
            vo.projection_max_iter = opt.projection_max_iter;
            const double primal_target = 1e-3 * std::sqrt(double(n));
            for (int t = 1; t <= opt.max_iter; ++t)
            {
                v = v_update(qs, ell, phi, dual, rho, p_target, v, vo).v;
                const CVec phi_old = phi;
                phi = phi_update(v, dual, rho, phi_old);
                dual = dual_update(dual, v, phi, rho, opt.dual_step);
                const double r = (v - phi).norm();
                const double s = rho * (phi - phi_old).norm();
                const double lag = qs.objective(v) + dual.dot(v - phi).real() + 0.5 * rho * (v - phi).squaredNorm();
                run.lag.push_back(lag);
                run.res.push_back(r);
                run.iterations = t;
                run.primal = r;
                if (t > 1 && std::abs(lag - lag_prev) <= opt.eps * std::max(std::abs(lag_prev), 1e-12) &&
                    r <= primal_target)
                {
                    run.converged = true;
                    break;
                }
                lag_prev = lag;
                if (r > 10.0 * s && rho < 1e6 * opt.rho)
                    rho *= 2.0;
                else if (s > 10.0 * r && rho > 1e-6 * opt.rho)
                    rho *= 0.5;
            }
            run.phi = phi;
            return run;
        }
    }

    namespace
    {
        // Exact element-wise phase descent. multiplier < 0: minimize f subject to leakage <= p_leak,
        // otherwise minimize f + multiplier * leakage without constraint.
        void phase_sweeps(const RisQuadratics &q, double p_leak, double multiplier, CVec &x, int max_sweeps,
                          double tol)
        {
            const Eigen::Index n = q.size();
            CVec y = q.J.adjoint() * x; // Xi x = J y
            CVec z = q.K.adjoint() * x; // Upsilon x = K z
            auto objective = [&] { return y.squaredNorm() - 2.0 * x.dot(q.c).real(); };
            const bool constrained = multiplier < 0.0;
            double f = objective();
            for (int sweep = 0; sweep < max_sweeps; ++sweep)
            {
                const double f_start = f;
                for (Eigen::Index i = 0; i < n; ++i)
                {
                    const double xi_ii = q.J.row(i).squaredNorm();
                    const double ups_ii = q.K.row(i).squaredNorm();
                    // Terms coupling x_i with the rest: 2 Re(conj(x_i) b) and 2 Re(conj(x_i) d)
                    const cd b = (q.J.row(i) * y).value() - xi_ii * x(i) - q.c(i);
                    const cd d = (q.K.row(i) * z).value() - ups_ii * x(i);
                    const double ad = std::abs(d);
                    double theta;
                    if (!constrained)
                    {
                        const cd e = b + multiplier * d;
                        theta = std::abs(e) > 0.0 ? std::arg(-e) : std::arg(x(i));
                    }
                    else
                    {
                        const double leak = z.squaredNorm();
                        const double rest = leak - 2.0 * std::real(std::conj(x(i)) * d) - ups_ii;
                        if (leak > p_leak && ad > 0.0)
                            theta = std::arg(d) + pi;
                        else
                        {
                            theta = std::abs(b) > 0.0 ? std::arg(-b) : std::arg(x(i));
                            if (ad > 0.0)
                            {
                                // Feasible arc: cos(theta - arg d) <= gamma
                                const double gamma = (p_leak - rest - ups_ii) / (2.0 * ad);
                                if (gamma < 1.0)
                                {
                                    const double half = std::acos(std::max(-1.0, gamma));
                                    const double off = std::remainder(theta - std::arg(d), 2.0 * pi);
                                    if (std::abs(off) < half)
                                        theta = std::arg(d) + (off >= 0.0 ? half : -half);
                                }
                            }
                        }
                    }
                    const cd xn = std::polar(1.0, theta);
                    const cd delta = xn - x(i);
                    if (delta == cd(0.0, 0.0))
                        continue;
                    y += q.J.row(i).adjoint() * delta;
                    z += q.K.row(i).adjoint() * delta;
                    x(i) = xn;
                }
                f = objective();
                const bool settled = !constrained || z.squaredNorm() <= p_leak;
                if (settled && std::abs(f_start - f) <= tol * std::max(std::abs(f), 1e-300))
                    break;
            }
        }
    } // namespace

    CVec refine_phases(const RisQuadratics &q, double p_leak, const CVec &v, int max_sweeps, double tol,
                       int dual_steps)
    {
        const Eigen::Index n = q.size();
        if (v.size() != n)
            throw ParameterError("refine_phases: dimension mismatch");
        CVec x = unit_phases(v);
        phase_sweeps(q, p_leak, -1.0, x, max_sweeps, tol);
        if (dual_steps <= 0 || q.leakage(x) < p_leak * (1.0 - 1e-6))
            return x;

        // Active leakage: bisect the multiplier of the relaxed problem, polishing each relaxed point
        CVec best = x;
        double f_best = q.leakage(x) <= p_leak * (1.0 + 1e-6) ? q.objective(x) : std::numeric_limits<double>::infinity();
        auto probe = [&](double multiplier) {
            CVec r = x;
            phase_sweeps(q, p_leak, multiplier, r, max_sweeps, tol);
            const bool over = q.leakage(r) > p_leak;
            phase_sweeps(q, p_leak, -1.0, r, max_sweeps, tol);
            const double fr = q.objective(r);
            if (q.leakage(r) <= p_leak * (1.0 + 1e-6) && fr < f_best)
            {
                best = r;
                f_best = fr;
            }
            return over;
        };
        const double unit = std::max(lambda_max_gram(q.J), 1e-300) / std::max(lambda_max_gram(q.K), 1e-300);
        double lo = 0.0;
        double hi = unit;
        for (int k = 0; k < 40 && probe(hi); ++k)
        {
            lo = hi;
            hi *= 4.0;
        }
        for (int k = 0; k < dual_steps; ++k)
        {
            const double mid = lo > 0.0 ? std::sqrt(lo * hi) : hi / 16.0;
            if (probe(mid))
                lo = mid;
            else
                hi = mid;
        }
        return best;
    }

    AdmmResult admm_solve(const RisQuadratics &q, double p_leak, const CVec &v_input, const AdmmOptions &opt)
    {
        const Eigen::Index n = q.size();
        if (p_leak < 0.0)
            throw ParameterError("admm_solve: p_leak must be non-negative");
        if (v_input.size() != 0 && v_input.size() != n)
            throw ParameterError("admm_solve: v_input dimension mismatch");
        AdmmResult out;
        const double feas_cap = p_leak * (1.0 + 1e-6);

        // Objective normalized so that rho is measured against unit curvature
        const double scale = std::max(lambda_max_gram(q.J), q.c.cwiseAbs().maxCoeff());
        CVec phi0 = unit_phases(q.c);
        if (v_input.size() == n)
            for (Eigen::Index i = 0; i < n; ++i)
                if (q.c(i) == cd(0.0, 0.0))
                    phi0(i) = v_input(i) / std::max(std::abs(v_input(i)), 1e-300);

        CVec cand = phi0;
        bool cand_feasible = q.leakage(cand) <= feas_cap;
        if (scale > 0.0)
        {
            RisQuadratics qs;
            qs.J = q.J / std::sqrt(scale);
            qs.K = q.K;
            qs.c = q.c / scale;
            EllipsoidProjector ell(q.K);
            for (double margin : opt.margins)
            {
                AdmmRun run = admm_core(qs, ell, p_leak * (1.0 - margin), phi0, opt);
                out.iterations += run.iterations;
                out.lagrangian_trace.insert(out.lagrangian_trace.end(), run.lag.begin(), run.lag.end());
                out.residual_trace.insert(out.residual_trace.end(), run.res.begin(), run.res.end());
                out.converged = run.converged;
                out.primal_residual = run.primal;
                cand = unit_phases(run.phi);
                cand_feasible = q.leakage(cand) <= feas_cap;
                if (cand_feasible)
                    break;
            }
        }
        if (opt.refine_sweeps > 0)
        {
            std::vector<CVec> starts{cand, phi0};
            std::mt19937_64 gen(0x5eedULL + std::uint64_t(n));
            std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
            for (int k = 0; k < opt.refine_starts; ++k)
            {
                CVec s(n);
                for (Eigen::Index i = 0; i < n; ++i)
                    s(i) = std::polar(1.0, angle(gen));
                starts.push_back(std::move(s));
            }
            for (const CVec &start : starts)
            {
                const CVec r = refine_phases(q, p_leak, start, opt.refine_sweeps, 1e-12, opt.refine_dual_steps);
                const bool r_feasible = q.leakage(r) <= feas_cap;
                if ((r_feasible && !cand_feasible) ||
                    (r_feasible == cand_feasible && q.objective(r) < q.objective(cand)))
                {
                    cand = r;
                    cand_feasible = r_feasible;
                }
            }
        }
        out.v = cand;
        out.feasible = cand_feasible;
        if (v_input.size() == n)
        {
            const CVec vin = unit_phases(v_input);
            const bool in_feasible = q.leakage(vin) <= feas_cap;
            const double f_in = q.objective(vin);
            const double f_c = q.objective(cand);
            if (in_feasible && (!cand_feasible || f_c > f_in + 1e-6 * std::max(std::abs(f_in), 1e-300)))
            {
                out.v = vin;
                out.feasible = true;
                out.kept_input = true;
            }
        }
        out.objective = q.objective(out.v);
        out.leakage = q.leakage(out.v);
        return out;
    }

    AdmmResult admm_reflection(const CMat &H, const CMat &F, const CMat &G, const CMat &W_RF, const CMat &W_BB,
                               const CMat &U, const CMat &Psi, double p_leak, const CVec &v_input,
                               const AdmmOptions &opt)
    {
        if (W_RF.cols() != W_BB.rows())
            throw ParameterError("admm_reflection: dimension mismatch");
        RisQuadratics q = build_quadratics(H, F, G, U, Psi, CMat(W_RF * W_BB), false);
        return admm_solve(q, p_leak, v_input, opt);
    }
}
