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

#include "hmimo/precoding.hpp"
#include "hmimo/error.hpp"

#include <cmath>

namespace hmimo
{

ChannelStats channel_stats(std::span<const CVector> estimates)
{
    if (estimates.size() < 2)
        throw Error(ErrorKind::TooFewSamples, "channel statistics need at least two vectors");
    const Eigen::Index n = estimates.front().size();
    if (n == 0)
        throw Error(ErrorKind::DimensionMismatch, "empty channel vector");
    for (const auto &h : estimates)
        if (h.size() != n)
            throw Error(ErrorKind::DimensionMismatch, "channel vectors differ in length");

    ChannelStats st{CVector::Zero(n), CMatrix::Zero(n, n)};
    for (const auto &h : estimates)
        st.mu_vec += h;
    st.mu_vec /= double(estimates.size());
    for (const auto &h : estimates)
    {
        const CVector d = h - st.mu_vec;
        st.r_cov.noalias() += d * d.adjoint();
    }
    st.r_cov = symmetrize(st.r_cov / double(estimates.size()));
    require_finite(st.r_cov, "channel covariance");
    return st;
}

RfPrecoder rf_precoder(const ChannelStats &stats, std::size_t n_rf)
{
    const Eigen::Index n_tx = stats.r_cov.rows();
    if (n_rf == 0 || Eigen::Index(n_rf) > n_tx)
        throw Error(ErrorKind::DimensionMismatch, "n_rf must lie in [1, n_tx]");

    const HermitianEvd evd = hermitian_evd(stats.r_cov);
    const double lmax = std::max(evd.eigvals(0), 0.0);
    const double mag = 1.0 / std::sqrt(double(n_tx));

    RfPrecoder out;
    out.f_rf = CMatrix::Constant(n_tx, Eigen::Index(n_rf), cplx(mag, 0.0));
    for (Eigen::Index j = 0; j < Eigen::Index(n_rf); ++j)
    {
        const double lam = evd.eigvals(j);
        if (!(lmax > 0.0) || lam <= 1e-12 * lmax)
            continue;
        ++out.rank;
        const CVector col = evd.eigvecs.col(j) * std::sqrt(lam);
        const double cutoff = 1e-14 * col.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < n_tx; ++i)
        {
            const double a = std::abs(col(i));
            out.f_rf(i, j) = a > cutoff ? std::polar(mag, std::arg(col(i))) : cplx(mag, 0.0);
        }
    }
    out.rank_deficient = out.rank < n_rf;
    return out;
}

BasebandPrecoder mmse_baseband(const CMatrix &h_eff, const CMatrix &r_n, double power_budget)
{
    if (!(power_budget > 0.0) || !std::isfinite(power_budget))
        throw Error(ErrorKind::NonPositiveBudget, "power budget must be positive");
    require_finite(h_eff, "effective channel");
    require_finite(r_n, "noise covariance");
    if (r_n.rows() != h_eff.rows() || r_n.cols() != h_eff.rows())
        throw Error(ErrorKind::DimensionMismatch, "noise covariance must be k x k");
    if (!is_psd(r_n))
        throw Error(ErrorKind::Singular, "noise covariance is not PSD");

    const CMatrix gram = h_eff * h_eff.adjoint() + r_n;
    // (gram^-1 h)^H = h^H gram^-1 because gram is Hermitian.
    const CMatrix unscaled = solve_hpd(gram, h_eff).adjoint();
    const double power = unscaled.squaredNorm();
    if (!(power > 0.0))
        throw Error(ErrorKind::Singular, "precoder vanished; effective channel is zero");

    BasebandPrecoder out;
    out.beta = std::sqrt(power_budget / power);
    out.f_bb = out.beta * unscaled;
    return out;
}

RVector allocate_power(std::size_t k_users, double p_max, PowerPolicy policy)
{
    if (k_users == 0)
        throw Error(ErrorKind::DimensionMismatch, "need at least one user");
    if (!(p_max > 0.0))
        throw Error(ErrorKind::NonPositiveBudget, "p_max must be positive");
    switch (policy)
    {
    case PowerPolicy::Uniform:
        break;
    }
    return RVector::Constant(Eigen::Index(k_users), p_max / std::sqrt(double(k_users)));
}

void normalize_hybrid(PrecoderSet &p, double target)
{
    const double now = (p.f_rf * p.f_bb).squaredNorm();
    if (!(now > 0.0))
        throw Error(ErrorKind::Singular, "hybrid precoder is zero");
    const double c = std::sqrt(target / now);
    p.f_bb *= c;
    p.beta *= c;
}

double precoder_gain_ratio(const CMatrix &f_bb, const CMatrix &h_eff, double noise_var)
{
    if (!(noise_var > 0.0))
        throw Error(ErrorKind::NonPositiveNoise, "noise variance must be positive");
    return (h_eff * f_bb).squaredNorm() / (noise_var * f_bb.squaredNorm());
}

} // namespace hmimo
