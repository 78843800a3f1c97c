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

#ifndef XLRIS_RIS_HPP
#define XLRIS_RIS_HPP

#include "xlris/types.hpp"

#include <vector>

namespace xlris
{
    // Quadratic model of the reflection subproblem:
    //   objective(v) = v^H Xi v - 2 Re(v^H c),  leakage(v) = v^H Upsilon v.
    // Xi = J J^H and Upsilon = K K^H; the factors carry all numerical work.
    struct RisQuadratics
    {
        CMat Xi;      // N x N, Hermitian PSD (empty when built without dense matrices)
        CMat Upsilon; // N x N, Hermitian PSD
        CVec c;       // N
        CMat J;       // N x r_xi
        CMat K;       // N x r_ups

        Eigen::Index size() const { return c.size(); }
        double objective(const CVec &v) const;
        double leakage(const CVec &v) const;
        CMat xi_dense() const;
        CMat upsilon_dense() const;
    };

    // Columns P(:,a) .* conj(Q(:,b)), so that (P P^H) o (Q Q^H)^T = R R^H
    CMat hadamard_factor(const CMat &P, const CMat &Q);

    // A = H^H U Psi U^H H, B = G W W^H G^H, C = H^H U Psi W^H G^H, Fbar = F^H F
    RisQuadratics build_quadratics(const CMat &H, const CMat &F, const CMat &G, const CMat &U, const CMat &Psi,
                                   const CMat &W_hat, bool with_dense = true);

    // From dense Hermitian PSD Xi, Upsilon (factors via eigendecomposition)
    RisQuadratics make_quadratics(const CMat &Xi, const CMat &Upsilon, const CVec &c);

    // Euclidean projection onto {v : v^H K K^H v <= p}
    class EllipsoidProjector
    {
      public:
        EllipsoidProjector() = default;
        explicit EllipsoidProjector(const CMat &K);
        CVec project(const CVec &v, double p_leak) const;
        double leakage(const CVec &v) const;

      private:
        CMat basis_; // N x r orthonormal
        RVec eig_;   // r positive eigenvalues
    };

    CVec project_discs(const CVec &v);
    CVec project_ellipsoid(const CVec &v, const CMat &Upsilon, double p_leak);

    // Dykstra alternating projections onto discs and the ellipsoid; output feasible for both
    CVec project_intersection(const CVec &v, const EllipsoidProjector &ell, double p_leak, int max_iter = 200,
                              double tol = 1e-10);

    struct VUpdateOptions
    {
        int max_iter = 500;
        double tol = 1e-9;
        int projection_max_iter = 200;
    };

    struct VUpdateResult
    {
        CVec v;
        double kkt_residual = 0.0; // relative gradient-mapping norm
        int iterations = 0;
        bool converged = false;
    };

    VUpdateResult v_update(const RisQuadratics &q, const EllipsoidProjector &ell, const CVec &phi, const CVec &dual,
                           double rho, double p_leak, const CVec &v_warm, const VUpdateOptions &opt = {});
    VUpdateResult v_update(const RisQuadratics &q, const CVec &phi, const CVec &dual, double rho, double p_leak,
                           const VUpdateOptions &opt = {});

    // Unit-modulus minimizer of ||v - phi + dual/rho||; zero arguments keep phi_prev
    CVec phi_update(const CVec &v, const CVec &dual, double rho, const CVec &phi_prev);
    CVec dual_update(const CVec &dual, const CVec &v, const CVec &phi, double rho, double step_factor = 2.0);

    struct AdmmOptions
    {
        double eps = 1e-4;
        int max_iter = 300;
        double rho = 1.0;
        double dual_step = 1.0; // 2.0 reproduces the printed update, which oscillates
        std::vector<double> margins{0.0, 1e-3, 1e-2, 1e-1, 3e-1}; // p_leak backoffs tried in order
        int inner_max_iter = 200;      // projected-gradient steps per v-update
        int projection_max_iter = 200; // Dykstra sweeps per projection
        int refine_sweeps = 100;       // element-wise phase sweeps after ADMM; 0 disables
        int refine_starts = 16;        // extra refinement starts from fixed-seed random phases
        int refine_dual_steps = 12;    // multiplier bisection steps when leakage is active; 0 disables
    };

    struct AdmmResult
    {
        CVec v;          // unit modulus
        double objective = 0.0;
        double leakage = 0.0;
        double primal_residual = 0.0;
        int iterations = 0;
        bool converged = false;
        bool feasible = false;
        bool kept_input = false; // ADMM candidate did not improve on the input vector
        std::vector<double> lagrangian_trace;
        std::vector<double> residual_trace;
    };

    // Cyclic exact phase minimization per element; leakage is reduced first when v is infeasible and then
    // never exceeds p_leak. Objective is non-increasing once feasible. With dual_steps > 0 and an active
    // leakage constraint, relaxed points f + mu * leakage are also polished; the result never gets worse.
    CVec refine_phases(const RisQuadratics &q, double p_leak, const CVec &v, int max_sweeps = 100,
                       double tol = 1e-12, int dual_steps = 0);

    // v_input may be empty; when given it is returned if the ADMM candidate is worse or infeasible
    AdmmResult admm_solve(const RisQuadratics &q, double p_leak, const CVec &v_input, const AdmmOptions &opt = {});

    AdmmResult admm_reflection(const CMat &H, const CMat &F, const CMat &G, const CMat &W_RF, const CMat &W_BB,
                               const CMat &U, const CMat &Psi, double p_leak, const CVec &v_input,
                               const AdmmOptions &opt = {});
}

#endif
