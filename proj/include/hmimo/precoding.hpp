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

#include <span>

#include "hmimo/linalg.hpp"

namespace hmimo
{

// Spatial second-order statistics of a set of channel vectors.
struct ChannelStats
{
    CVector mu_vec;
    CMatrix r_cov; // Hermitian PSD
};

// Sample mean and covariance (1/n normalisation) of equal-length vectors.
ChannelStats channel_stats(std::span<const CVector> estimates);

struct RfPrecoder
{
    CMatrix f_rf;                // n_tx x n_rf, every entry of magnitude 1/sqrt(n_tx)
    std::size_t rank = 0;        // eigenvalues above 1e-12 * lambda_max
    bool rank_deficient = false; // true when rank < n_rf; extra columns are constant
};

// Dominant-eigenspace analog precoder: U * V^(1/2) over the n_rf strongest
// eigenpairs of r_cov, then every entry projected onto magnitude 1/sqrt(n_tx)
// with its phase kept (zero entries take phase 0).
RfPrecoder rf_precoder(const ChannelStats &stats, std::size_t n_rf);

struct BasebandPrecoder
{
    CMatrix f_bb; // n_rf x k
    double beta = 0.0;
};

// Regularised channel inversion beta * H^H (H H^H + R_n)^-1 on the effective
// k x n_rf channel, with beta chosen so ||f_bb||_F^2 equals power_budget.
BasebandPrecoder mmse_baseband(const CMatrix &h_eff, const CMatrix &r_n, double power_budget);

enum class PowerPolicy
{
    Uniform
};

// Diagonal per-stream power with ||diag||_2 = p_max.
RVector allocate_power(std::size_t k_users, double p_max, PowerPolicy policy = PowerPolicy::Uniform);

struct PrecoderSet
{
    CMatrix f_rf;
    CMatrix f_bb;
    RVector p_tr; // diagonal of the per-stream power matrix
    double beta = 0.0;

    // f_rf * f_bb
    CMatrix hybrid() const { return f_rf * f_bb; }
};

// Rescales f_bb (and beta) so that ||f_rf f_bb||_F^2 = target.
void normalize_hybrid(PrecoderSet &p, double target);

// Ratio of received power to noise power for a baseband precoder:
// Tr{F^H H^H H F} / (noise_var * Tr{F^H F}). Scale invariant in F.
double precoder_gain_ratio(const CMatrix &f_bb, const CMatrix &h_eff, double noise_var);

} // namespace hmimo
