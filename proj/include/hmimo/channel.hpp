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

#include <vector>

#include "hmimo/angle_phase.hpp"
#include "hmimo/linalg.hpp"
#include "hmimo/rng.hpp"

namespace hmimo
{

// Multipath description of one user's channel: one LOS path followed by
// reflected, diffracted and scattered paths, in that order.
struct PathSet
{
    std::vector<cplx> gains;
    std::vector<double> thetas; // wrapped to [-pi, pi]
    std::vector<double> phis;   // wrapped to [0, 2pi]
    std::size_t n_reflected = 0;
    std::size_t n_diffracted = 0;
    std::size_t n_scattered = 0;

    std::size_t n_paths() const { return gains.size(); }

    // Throws InvalidGeometry on inconsistent sizes, bad composition or non-finite data.
    void validate() const;
};

// One user's true and estimated channel. h_est is the same synthesis with
// every path angle offset by mismatch_theta.
struct ChannelRealization
{
    CMatrix h_true; // n_rx x n_tx
    CMatrix h_est;  // n_rx x n_tx
    PathSet paths;
    double mismatch_theta = 0.0;
};

// Steering vector for a planar wave at (theta, phi). Element m has phase
// 2*pi*spacing*max(m,1)*sin(theta)*g_m(phi), g_0 = cos, g_{m>=1} = sin.
CVector array_response(double theta, double phi, std::size_t n_elements, double spacing_wavelengths);

// H = sum_n gain_n * a_rx(theta_n, phi_n) * a_tx(theta_n, phi_n)^H.
CMatrix synthesize_matrix(const PathSet &paths, std::size_t n_rx, std::size_t n_tx, double spacing,
                          double theta_offset = 0.0);

ChannelRealization synthesize_channel(const PathSet &paths, std::size_t n_rx, std::size_t n_tx, double spacing,
                                      double mismatch_theta);

// i.i.d. CN(0, sigma2) entries.
CMatrix rayleigh_iid(std::size_t n_rx, std::size_t n_tx, double sigma2, Rng &rng);

struct PathDraw
{
    PathSet paths;
    std::vector<AnglePhaseSample> raw; // pre-wrap model draws, before theta_offset
};

// Draws n_paths angle/phase pairs from `model`, shifts angles by theta_offset
// and wraps them. The LOS gain has magnitude 1/sqrt(n_paths) and a uniform
// phase; all other gains are CN(0, 1/n_paths). Every gain is scaled by
// `amplitude` (path loss).
PathDraw draw_paths(const AnglePhaseModel &model, std::size_t n_paths, Rng &rng, double theta_offset = 0.0,
                    double amplitude = 1.0);

// Amplitude factor d^(-exponent/2) for a link of length distance (unit
// distance gives 1).
double path_loss_amplitude(double distance, double exponent);

} // namespace hmimo
