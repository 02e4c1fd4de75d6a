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

#include <cmath>
#include <random>
#include <vector>

#include "hmimo/combining.hpp"
#include "hmimo/linalg.hpp"
#include "hmimo/precoding.hpp"
#include "hmimo/rng.hpp"

namespace hmimo::testing
{

inline CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, Rng &rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = cplx(n(rng), n(rng));
    return m;
}

inline CVector random_cvector(Eigen::Index n, Rng &rng) { return random_cmatrix(n, 1, rng).col(0); }

inline CMatrix random_hermitian(Eigen::Index n, Rng &rng)
{
    const CMatrix a = random_cmatrix(n, n, rng);
    return 0.5 * (a + a.adjoint());
}

inline CMatrix unit_modulus(Eigen::Index rows, Eigen::Index cols, Rng &rng)
{
    std::uniform_real_distribution<double> u(-3.14159265358979, 3.14159265358979);
    CMatrix m(rows, cols);
    const double a = 1.0 / std::sqrt(double(rows));
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = std::polar(a, u(rng));
    return m;
}

inline std::size_t uniform_int(std::size_t lo, std::size_t hi, Rng &rng)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Small random combiner problem: K users with n_rx antennas, hybrid precoder
// built from a random analog stage and a random digital stage.
struct SmallInstance
{
    PrecoderSet precoder;
    std::vector<CMatrix> h;
    double sigma_n2 = 0.1;
    double p_max = 1.0;

    SumRateProblem problem() const { return SumRateProblem(precoder, h, sigma_n2, p_max); }

    CombinerSet random_combiner(Rng &rng) const
    {
        CombinerSet w;
        for (const auto &hk : h)
            w.w_blocks.push_back(random_cvector(hk.rows(), rng));
        return w;
    }
};

inline SmallInstance small_instance(Rng &rng, std::size_t k_max = 3, std::size_t n_rf_max = 4)
{
    SmallInstance s;
    const std::size_t k = uniform_int(1, k_max, rng);
    const std::size_t n_rf = uniform_int(k, n_rf_max, rng);
    const std::size_t n_tx = uniform_int(n_rf, n_rf + 3, rng);
    const std::size_t n_rx = uniform_int(1, 3, rng);
    for (std::size_t u = 0; u < k; ++u)
        s.h.push_back(random_cmatrix(Eigen::Index(n_rx), Eigen::Index(n_tx), rng));
    s.precoder.f_rf = unit_modulus(Eigen::Index(n_tx), Eigen::Index(n_rf), rng);
    s.precoder.f_bb = random_cmatrix(Eigen::Index(n_rf), Eigen::Index(k), rng);
    s.precoder.p_tr = allocate_power(k, 1.0);
    s.precoder.beta = 1.0;
    std::uniform_real_distribution<double> u(0.05, 1.0);
    s.sigma_n2 = u(rng);
    s.p_max = 0.5 + 4.0 * u(rng);
    return s;
}

// Central differences over (Re, Im) of every combiner entry, packed like the
// analytic gradient.
inline std::vector<CVector> finite_difference_gradient(const SumRateProblem &p, const CombinerSet &w, double h = 1e-6)
{
    std::vector<CVector> g;
    for (std::size_t k = 0; k < w.users(); ++k)
    {
        CVector gk(w.w_blocks[k].size());
        for (Eigen::Index i = 0; i < gk.size(); ++i)
        {
            double parts[2];
            for (int c = 0; c < 2; ++c)
            {
                const cplx d = c == 0 ? cplx(h, 0.0) : cplx(0.0, h);
                CombinerSet up = w, dn = w;
                up.w_blocks[k](i) += d;
                dn.w_blocks[k](i) -= d;
                parts[c] = (p.objective(up) - p.objective(dn)) / (2.0 * h);
            }
            gk(i) = cplx(parts[0], parts[1]);
        }
        g.push_back(gk);
    }
    return g;
}

} // namespace hmimo::testing
