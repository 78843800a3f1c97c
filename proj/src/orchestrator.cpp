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

#include "xlris/orchestrator.hpp"
#include "xlris/hybrid.hpp"
#include "xlris/linalg.hpp"
#include "xlris/ris.hpp"
#include "xlris/wmmse.hpp"

#include <algorithm>

namespace xlris
{
    Problem make_problem(const SystemConfig &cfg, const ChannelSet &ch)
    {
        cfg.validate();
        Problem p;
        p.ch = ch;
        p.sigma_b2 = cfg.sigma_b2();
        p.p_max = cfg.p_max();
        p.kappa = cfg.kappa;
        p.noise = NoiseUncertainty{cfg.sigma_w2(), cfg.rho(), cfg.m_w};
        p.noise.validate();
        p.p_leak = max_leakage(cfg.kappa, p.noise);
        p.m_rf = cfg.m_rf;
        p.streams = cfg.streams;
        p.tol = cfg.tol;
        return p;
    }

    BeamformerState init_beamformers(const SystemConfig &cfg, Rng &rng)
    {
        BeamformerState s;
        s.v = random_phase_v(rng, cfg.n());
        CVec rf = random_phase_v(rng, Eigen::Index(cfg.m_a) * cfg.m_rf);
        s.W_RF = Eigen::Map<CMat>(rf.data(), cfg.m_a, cfg.m_rf);
        std::normal_distribution<double> g(0.0, std::sqrt(0.5));
        s.W_BB.resize(cfg.m_rf, cfg.streams);
        for (Eigen::Index i = 0; i < s.W_BB.size(); ++i)
        {
            const double re = g(rng);
            s.W_BB(i) = cd(re, g(rng));
        }
        const double pw = (s.W_RF * s.W_BB).squaredNorm();
        s.W_BB *= std::sqrt(cfg.p_max() / pw);
        s.W_FD = s.W_RF * s.W_BB;
        return s;
    }

    namespace
    {
        // Unit noise, unit power budget, unit leakage budget
        struct Scaled
        {
            CMat G, H, F;
            double p_leak = 1.0; // 1, or 0 in the zero-leakage case
            double w_scale = 1.0; // physical W = w_scale * scaled W

            Scaled(const Problem &p)
            {
                w_scale = std::sqrt(p.p_max);
                G = p.ch.G * w_scale;
                H = p.ch.H / std::sqrt(p.sigma_b2);
                if (p.p_leak > 0.0)
                {
                    F = p.ch.F / std::sqrt(p.p_leak);
                    p_leak = 1.0;
                }
                else
                {
                    F = p.ch.F / std::sqrt(p.noise.sigma2);
                    p_leak = 0.0;
                }
            }

            CMat hb(const CVec &v) const { return H * v.asDiagonal() * G; }
            CMat hw(const CVec &v) const { return F * v.asDiagonal() * G; }
            double rate(const CMat &W, const CVec &v) const { return covert_rate(hb(v), W, 1.0); }
            double leak(const CMat &W, const CVec &v) const { return (hw(v) * W).squaredNorm(); }

            // Largest s <= 1 with s W feasible
            double feasible_factor(const CMat &W, const CVec &v) const
            {
                double s = 1.0;
                const double pw = W.squaredNorm();
                if (pw > 1.0)
                    s = std::min(s, std::sqrt(1.0 / pw));
                const double lk = leak(W, v);
                if (p_leak > 0.0 && lk > p_leak)
                    s = std::min(s, std::sqrt(p_leak / lk) * (1.0 - 1e-12));
                if (p_leak == 0.0 && lk > 1e-20 * std::max(pw, 1e-300))
                    s = 0.0;
                return s;
            }
        };

        WmmseOptions wmmse_options(const Tolerances &t)
        {
            WmmseOptions o;
            o.eps = t.wmmse_eps;
            o.max_iter = t.wmmse_max_iter;
            o.bisection_rel_tol = t.bisection_rel_tol;
            return o;
        }

        HybridOptions hybrid_options(const Tolerances &t)
        {
            HybridOptions o;
            o.eps = t.hybrid_eps;
            o.max_iter = t.hybrid_max_iter;
            o.mo.eps = t.mo_eps;
            o.mo.max_iter = t.mo_max_iter;
            return o;
        }

        AdmmOptions admm_options(const Tolerances &t)
        {
            AdmmOptions o;
            o.eps = t.admm_eps;
            o.max_iter = t.admm_max_iter;
            o.rho = t.admm_rho;
            o.dual_step = t.admm_dual_step;
            // Candidate judged by rate after rescaling W, so no backoff retries inside ADMM
            o.margins = {0.0};
            o.inner_max_iter = 20;
            o.projection_max_iter = 20;
            // Warm-started from the previous iterate; no random restarts
            o.refine_starts = 0;
            o.refine_dual_steps = 0;
            return o;
        }

        TraceRow make_row(int it, const Scaled &sc, const CMat &W, const CVec &v)
        {
            TraceRow r;
            r.iteration = it;
            r.rate = sc.rate(W, v);
            r.leakage = sc.leak(W, v);
            r.power = W.squaredNorm();
            return r;
        }

        void to_physical(Solution &sol, const Scaled &sc, const Problem &p)
        {
            const double ws = sc.w_scale;
            if (sol.state.W_BB.size())
                sol.state.W_BB *= ws;
            sol.state.W_FD *= ws;
            const double leak_unit = (sc.p_leak > 0.0) ? p.p_leak : p.noise.sigma2;
            for (auto &r : sol.trace)
            {
                r.leakage *= leak_unit;
                r.power *= ws * ws;
            }
            const CMat W = sol.state.precoder();
            const double z = leakage_power(p.ch.F, sol.state.v, p.ch.G, W);
            sol.report = make_report(z, p.noise, p.kappa);
            sol.rate = covert_rate(p.ch.H * sol.state.v.asDiagonal() * p.ch.G, W, p.sigma_b2);
        }
    }

    Solution alternating_optimization(const Problem &prob, const BeamformerState &init, const AoOptions &opt)
    {
        const Scaled sc(prob);
        const Tolerances &tol = prob.tol;
        const int L = prob.streams;
        const bool margin_mode = prob.m_rf < 2 * L;

        Solution sol;
        sol.scheme = opt.skip_hybrid ? Scheme::FD : (opt.fixed_ris ? Scheme::RP : Scheme::Proposed);
        CVec v = unit_phases(init.v);
        CMat W_RF, W_BB, W_FD;
        if (opt.skip_hybrid)
            W_FD = init.precoder() / sc.w_scale;
        else
        {
            W_RF = init.W_RF;
            W_BB = init.W_BB / sc.w_scale;
            W_FD = W_RF * W_BB;
        }
        auto deployed = [&]() { return opt.skip_hybrid ? W_FD : CMat(W_RF * W_BB); };
        {
            const double s = sc.feasible_factor(deployed(), v);
            if (opt.skip_hybrid)
                W_FD *= s;
            else
                W_BB *= s;
        }
        double rate = sc.rate(deployed(), v);
        sol.trace.push_back(make_row(0, sc, deployed(), v));

        for (int t = 1; t <= tol.ao_max_iter; ++t)
        {
            const double rate_start = rate;
            TraceRow row;
            row.iteration = t;

            // Stage I
            const CMat HB = sc.hb(v), HW = sc.hw(v);
            WmmseResult wm = wmmse_fully_digital(HB, HW, 1.0, 1.0, sc.p_leak, deployed(), wmmse_options(tol));
            row.wmmse_iterations = wm.iterations;
            row.rate_fd = wm.rate;

            // Stage II
            if (opt.skip_hybrid)
            {
                if (wm.rate >= rate)
                {
                    W_FD = wm.W;
                    rate = wm.rate;
                    row.stage2_accepted = true;
                }
            }
            else
            {
                HybridPrecoder hp = hybrid_decompose(wm.W, prob.m_rf, hybrid_options(tol));
                CMat Wh = hp.W_RF * hp.W_BB;
                if (margin_mode && sc.p_leak > 0.0 && sc.leak(Wh, v) > sc.p_leak * (1.0 + 1e-6))
                {
                    const double delta = 0.01 * sc.p_leak;
                    WmmseResult wm2 =
                        wmmse_fully_digital(HB, HW, 1.0, 1.0, sc.p_leak - delta, wm.W, wmmse_options(tol));
                    hp = hybrid_decompose(wm2.W, prob.m_rf, hybrid_options(tol));
                    hp.margin = delta;
                    Wh = hp.W_RF * hp.W_BB;
                    row.margin_rerun = true;
                }
                const double fd_norm = wm.W.norm();
                row.hybrid_residual = fd_norm > 0.0 ? (wm.W - Wh).norm() / fd_norm : 0.0;
                row.hybrid_iterations = hp.iterations;
                hp.W_BB *= sc.feasible_factor(Wh, v);
                const double cand = sc.rate(hp.W_RF * hp.W_BB, v);
                if (cand >= rate)
                {
                    W_RF = hp.W_RF;
                    W_BB = hp.W_BB;
                    rate = cand;
                    row.stage2_accepted = true;
                }
                W_FD = wm.W;
            }

            // Surface update
            if (!opt.fixed_ris)
            {
                const CMat W = deployed();
                const CMat HBc = sc.hb(v);
                if (W.squaredNorm() > 0.0)
                {
                    const CMat U = receive_filter(HBc, W, 1.0);
                    const CMat Psi = weight_matrix(mse_matrix(HBc, W, U, 1.0));
                    const RisQuadratics q = build_quadratics(sc.H, sc.F, sc.G, U, Psi, W, false);
                    AdmmResult ad = admm_solve(q, sc.p_leak, CVec(), admm_options(tol));
                    row.admm_iterations = ad.iterations;
                    row.admm_primal_residual = ad.primal_residual;
                    {
                        const double s = sc.feasible_factor(W, ad.v);
                        const double cand = sc.rate(W * s, ad.v);
                        if (cand >= rate)
                        {
                            v = ad.v;
                            if (opt.skip_hybrid)
                                W_FD *= s;
                            else
                                W_BB *= s;
                            rate = cand;
                            row.ris_accepted = true;
                        }
                    }
                }
            }

            const CMat Wd = deployed();
            row.rate = rate;
            row.leakage = sc.leak(Wd, v);
            row.power = Wd.squaredNorm();
            sol.trace.push_back(row);
            sol.iterations = t;
            if (std::abs(rate - rate_start) <= tol.ao_eps * std::max(rate, 1e-300))
            {
                sol.converged = true;
                break;
            }
        }

        sol.state.v = v;
        sol.state.W_FD = W_FD;
        if (!opt.skip_hybrid)
        {
            sol.state.W_RF = W_RF;
            sol.state.W_BB = W_BB;
        }
        to_physical(sol, sc, prob);
        return sol;
    }

    Solution zero_forcing_scheme(const Problem &prob, const CVec &v_init, int rounds)
    {
        const Scaled sc(prob);
        CVec v = unit_phases(v_init);
        ZfResult zf;
        for (int k = 0; k < rounds; ++k)
        {
            zf = zf_beamformer(sc.hb(v), sc.hw(v), 1.0, prob.streams);
            if (zf.degenerate)
                break;
            v = sum_path_gain_ris(sc.H, sc.G, zf.W, v).v;
        }
        zf = zf_beamformer(sc.hb(v), sc.hw(v), 1.0, prob.streams);
        Solution sol;
        sol.scheme = Scheme::ZF;
        sol.state.v = v;
        sol.state.W_FD = zf.W;
        HybridPrecoder hp = hybrid_decompose(zf.W, prob.m_rf, hybrid_options(prob.tol));
        hp.W_BB *= sc.feasible_factor(hp.W_RF * hp.W_BB, v);
        sol.state.W_RF = hp.W_RF;
        sol.state.W_BB = hp.W_BB;
        sol.iterations = rounds;
        sol.converged = !zf.degenerate;
        TraceRow row = make_row(1, sc, hp.W_RF * hp.W_BB, v);
        row.hybrid_iterations = hp.iterations;
        row.hybrid_residual = zf.W.norm() > 0.0 ? (zf.W - hp.W_RF * hp.W_BB).norm() / zf.W.norm() : 0.0;
        sol.trace.push_back(row);
        to_physical(sol, sc, prob);
        return sol;
    }

    Evaluation evaluate_solution(const Solution &sol, const Problem &prob, double rel_slack)
    {
        const CMat W = sol.state.precoder();
        Evaluation ev;
        const double z = leakage_power(prob.ch.F, sol.state.v, prob.ch.G, W);
        ev.report = make_report(z, prob.noise, prob.kappa);
        ev.rate = covert_rate(prob.ch.H * sol.state.v.asDiagonal() * prob.ch.G, W, prob.sigma_b2);
        ev.power = W.squaredNorm();
        if (ev.power > prob.p_max * (1.0 + rel_slack))
            throw InfeasibleError("evaluate_solution: power constraint violated");
        if (z > prob.p_leak * (1.0 + rel_slack) + 1e-30)
            throw InfeasibleError("evaluate_solution: covertness constraint violated");
        if (sol.state.W_RF.size() && (sol.state.W_RF.cwiseAbs().array() - 1.0).abs().maxCoeff() > 1e-9)
            throw InfeasibleError("evaluate_solution: analog precoder unit-modulus constraint violated");
        if ((sol.state.v.cwiseAbs().array() - 1.0).abs().maxCoeff() > 1e-9)
            throw InfeasibleError("evaluate_solution: reflection unit-modulus constraint violated");
        if (ev.report.min_dep < 1.0 - prob.kappa - 1e-6)
            throw InfeasibleError("evaluate_solution: minimum DEP below 1 - kappa");
        return ev;
    }

    Solution run_scheme(const SystemConfig &cfg, const ChannelSet &ch, Scheme scheme, std::uint64_t seed)
    {
        Rng init_rng(derive_seed(seed, 2));
        const BeamformerState init = init_beamformers(cfg, init_rng);
        switch (scheme)
        {
        case Scheme::Proposed:
            return alternating_optimization(make_problem(cfg, ch), init);
        case Scheme::FD:
        {
            // Continues from the hybrid solution; AO never lowers the rate, so FD >= Proposed
            const Problem prob = make_problem(cfg, ch);
            const Solution hybrid = alternating_optimization(prob, init);
            return alternating_optimization(prob, hybrid.state, AoOptions{true, false});
        }
        case Scheme::RP:
        {
            Rng rp_rng(derive_seed(seed, 3));
            BeamformerState s = init;
            s.v = random_phase_v(rp_rng, cfg.n());
            return alternating_optimization(make_problem(cfg, ch), s, AoOptions{false, true});
        }
        case Scheme::FF:
        {
            Solution sol = alternating_optimization(make_problem(cfg, far_field_scenario(cfg, ch)), init);
            sol.scheme = Scheme::FF;
            return sol;
        }
        case Scheme::ZF:
            return zero_forcing_scheme(make_problem(cfg, ch), init.v);
        }
        throw ParameterError("run_scheme: unknown scheme");
    }

    Solution run_scheme(const SystemConfig &cfg, Scheme scheme, std::uint64_t seed)
    {
        Rng ch_rng(derive_seed(seed, 1));
        const ChannelSet ch = build_channels(cfg, ch_rng);
        return run_scheme(cfg, ch, scheme, seed);
    }
}
