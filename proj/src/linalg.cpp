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

#include "hmimo/linalg.hpp"
#include "hmimo/error.hpp"

#include <cmath>
#include <string>

namespace hmimo
{

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::InvalidGeometry: return "InvalidGeometry";
    case ErrorKind::InvalidSigma: return "InvalidSigma";
    case ErrorKind::InvalidRho: return "InvalidRho";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::QuadratureNonConvergent: return "QuadratureNonConvergent";
    case ErrorKind::NonPositiveBudget: return "NonPositiveBudget";
    case ErrorKind::NonPositiveNoise: return "NonPositiveNoise";
    case ErrorKind::InfeasibleInit: return "InfeasibleInit";
    case ErrorKind::ZeroChannel: return "ZeroChannel";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

void require_finite(const CMatrix &m, const char *what)
{
    if (m.size() == 0)
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + " is empty");
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                throw Error(ErrorKind::NotFinite, std::string(what) + " contains NaN or Inf");
}

double hermitian_defect(const CMatrix &m)
{
    double worst = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    return worst;
}

bool is_hermitian(const CMatrix &m, double rel_tol)
{
    if (m.rows() != m.cols())
        return false;
    return hermitian_defect(m) <= rel_tol * m.norm();
}

CMatrix symmetrize(const CMatrix &m)
{
    return 0.5 * (m + m.adjoint());
}

double frobenius_norm(const CMatrix &m)
{
    return m.norm();
}

HermitianEvd hermitian_evd(const CMatrix &m)
{
    require_finite(m, "hermitian_evd input");
    if (m.rows() != m.cols())
        throw Error(ErrorKind::NotHermitian, "matrix is not square");
    if (!is_hermitian(m, 1e-9))
        throw Error(ErrorKind::NotHermitian, "symmetry defect exceeds 1e-9 * ||m||_F");

    const Eigen::Index n = m.rows();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetrize(m));
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::NotFinite, "eigensolver did not converge");

    // Eigen returns ascending order; flip.
    HermitianEvd out{RVector(n), CMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k)
    {
        out.eigvals(k) = solver.eigenvalues()(n - 1 - k);
        CVector v = solver.eigenvectors().col(n - 1 - k);

        Eigen::Index lead = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double a = std::abs(v(i));
            if (a > best * (1.0 + 1e-12))
            {
                best = a;
                lead = i;
            }
        }
        if (best > 0.0)
            v *= std::conj(v(lead)) / best;
        out.eigvecs.col(k) = v;
    }
    return out;
}

CMatrix solve_hpd(const CMatrix &a, const CMatrix &b)
{
    require_finite(a, "solve_hpd lhs");
    require_finite(b, "solve_hpd rhs");
    if (a.rows() != a.cols() || a.rows() != b.rows())
        throw Error(ErrorKind::DimensionMismatch, "solve_hpd operands are not conformable");
    if (!is_hermitian(a, 1e-9))
        throw Error(ErrorKind::NotHermitian, "solve_hpd lhs is not Hermitian");

    const CMatrix as = symmetrize(a);
    Eigen::LLT<CMatrix> llt(as);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorKind::Singular, "matrix is not positive definite");

    // rcond from the Cholesky factor is a cheap estimate; fall back to the
    // spectrum when it is borderline so the 1e14 threshold is applied exactly.
    double rcond = llt.rcond();
    if (!(rcond > 1e-13))
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(as, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
        rcond = (hi > 0.0 && lo > 0.0) ? lo / hi : 0.0;
    }
    if (!(rcond * 1e14 >= 1.0))
        throw Error(ErrorKind::Singular, "condition estimate exceeds 1e14");

    CMatrix x = llt.solve(b);
    // One step of iterative refinement keeps the residual well inside 1e-9.
    x += llt.solve(b - as * x);
    return x;
}

bool is_psd(const CMatrix &m, double rel_tol)
{
    if (!is_hermitian(m, 1e-9))
        return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -rel_tol * m.norm();
}

} // namespace hmimo
