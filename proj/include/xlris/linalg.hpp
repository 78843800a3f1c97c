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

#ifndef XLRIS_LINALG_HPP
#define XLRIS_LINALG_HPP

#include "xlris/types.hpp"

namespace xlris
{
    // Pseudo-inverse of a Hermitian matrix; eigenvalues below rel_floor * max|lambda| are dropped
    CMat hermitian_pinv(const CMat &A, double rel_floor = 1e-12);

    // log2 det(A) for Hermitian positive definite A
    double log2_det_hpd(const CMat &A);

    // Orthonormal basis of range(A), rank decided by rel_tol * sigma_max
    CMat range_basis(const CMat &A, double rel_tol = 1e-12);

    // Largest eigenvalue of a Hermitian PSD matrix given as J * J^H
    double lambda_max_gram(const CMat &J);

    inline double frob2(const CMat &A) { return A.squaredNorm(); }

    // Entrywise unit-modulus phases; zero entries map to 1
    CVec unit_phases(const CVec &x);
}

#endif
