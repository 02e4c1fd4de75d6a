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
#include <vector>

#include "hmimo/rng.hpp"

namespace hmimo
{

inline constexpr double kPi = 3.14159265358979323846;

// Bivariate Gaussian over (angle, phase). Angles in radians.
struct AnglePhaseModel
{
    double mu_theta = 0.0;
    double mu_phi = 0.0;
    double sigma_theta = 1.0;
    double sigma_phi = 1.0;
    double rho = 0.0;

    // Throws InvalidModel unless sigmas > 0, |rho| < 1 and all fields finite.
    void validate() const;

    // Joint density at (theta, phi).
    double density(double theta, double phi) const;
};

struct AnglePhaseSample
{
    double theta;
    double phi;
};

// theta into [-pi, pi], phi into [0, 2pi].
double wrap_angle(double theta);
double wrap_phase(double phi);

// Z1, Z2 ~ N(0,1) i.i.d.; theta = s_t Z1 + m_t, phi = s_p (rho Z1 + sqrt(1-rho^2) Z2) + m_p.
// Returned samples are NOT wrapped; call wrap_angle / wrap_phase for synthesis.
std::vector<AnglePhaseSample> sample_angle_phase(const AnglePhaseModel &model, std::size_t n, Rng &rng);

struct ConditionalMoments
{
    double mean_phi;
    double var_phi;
};

// Moments of phi given theta.
ConditionalMoments conditional_moments(const AnglePhaseModel &model, double theta);

struct MleFit
{
    AnglePhaseModel model;
    double sample_cov; // cross-moment with the N denominator
};

// Means are sample means, variances use n-1, the cross-covariance uses n and
// rho is clamped to (-1 + 1e-9, 1 - 1e-9).
MleFit fit_mle(std::span<const AnglePhaseSample> samples);

} // namespace hmimo
