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

#include "xlris/linalg.hpp"

namespace xlris
{
    CMat hermitian_pinv(const CMat &A, double rel_floor)
    {
        const Eigen::Index n = A.rows();
        if (n != A.cols())
            throw ParameterError("hermitian_pinv: matrix must be square");
        if (n == 0)
            return CMat(0, 0);
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (A + A.adjoint()));
        if (es.info() != Eigen::Success)
            throw NumericError("hermitian_pinv: eigendecomposition failed");
        const RVec &ev = es.eigenvalues();
        double lmax = ev.cwiseAbs().maxCoeff();
        if (lmax == 0.0)
            throw NumericError("hermitian_pinv: all-zero system matrix");
        RVec inv(n);
        for (Eigen::Index i = 0; i < n; ++i)
            inv(i) = (std::abs(ev(i)) > rel_floor * lmax) ? 1.0 / ev(i) : 0.0;
        const CMat &V = es.eigenvectors();
        return V * inv.asDiagonal() * V.adjoint();
    }

    double log2_det_hpd(const CMat &A)
    {
        Eigen::LLT<CMat> llt(0.5 * (A + A.adjoint()));
        if (llt.info() != Eigen::Success)
            throw NumericError("log2_det_hpd: matrix not positive definite");
        double s = 0.0;
        const CMat &L = llt.matrixLLT();
        for (Eigen::Index i = 0; i < L.rows(); ++i)
            s += std::log2(L(i, i).real());
        return 2.0 * s;
    }

    CMat range_basis(const CMat &A, double rel_tol)
    {
        if (A.size() == 0)
            return CMat(A.rows(), 0);
        Eigen::BDCSVD<CMat> svd(A, Eigen::ComputeThinU);
        const RVec &s = svd.singularValues();
        Eigen::Index r = 0;
        double smax = s.size() ? s(0) : 0.0;
        while (r < s.size() && s(r) > rel_tol * smax && smax > 0.0)
            ++r;
        return svd.matrixU().leftCols(r);
    }

    double lambda_max_gram(const CMat &J)
    {
        if (J.size() == 0)
            return 0.0;
        CMat g = J.adjoint() * J; // same nonzero spectrum as J J^H
        Eigen::SelfAdjointEigenSolver<CMat> es(g, Eigen::EigenvaluesOnly);
        return std::max(0.0, es.eigenvalues().maxCoeff());
    }

    CVec unit_phases(const CVec &x)
    {
        CVec out(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
        {
            double a = std::abs(x(i));
            out(i) = (a > 0.0) ? x(i) / a : cd(1.0, 0.0);
        }
        return out;
    }
}
