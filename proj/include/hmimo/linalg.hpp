// SPDX-License-Identifier: Apache-2.0
//
// hmimo - hybrid precoding simulator for multi-user massive MIMO
// Copyright (C) 2026 The hmimo authors
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

#pragma once

#include <complex>
#include <Eigen/Dense>

namespace hmimo
{

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct HermitianEvd
{
    RVector eigvals; // descending
    CMatrix eigvecs; // columns are orthonormal eigenvectors
};

// Throws NotFinite if any entry is NaN/Inf.
void require_finite(const CMatrix &m, const char *what);

// Largest |m(i,j) - conj(m(j,i))|.
double hermitian_defect(const CMatrix &m);

// True when the defect is within `rel_tol * ||m||_F`.
bool is_hermitian(const CMatrix &m, double rel_tol = 1e-9);

// (m + m^H) / 2
CMatrix symmetrize(const CMatrix &m);

double frobenius_norm(const CMatrix &m);

// Eigendecomposition of a Hermitian matrix. The input is symmetrized before
// decomposition. Each eigenvector is rotated so its largest-magnitude entry is
// real and positive; ties go to the lowest index.
HermitianEvd hermitian_evd(const CMatrix &m);

// Solves a * x = b for Hermitian positive-definite a.
// Throws Singular when the condition estimate exceeds 1e14.
CMatrix solve_hpd(const CMatrix &a, const CMatrix &b);

// Eigenvalue bounds check for positive semi-definiteness.
bool is_psd(const CMatrix &m, double rel_tol = 1e-10);

} // namespace hmimo
