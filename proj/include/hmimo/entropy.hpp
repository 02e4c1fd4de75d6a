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

#include <optional>

#include "hmimo/angle_phase.hpp"

namespace hmimo
{

// All entropies are in nats.
struct EntropyReport
{
    double s_theta = 0.0;
    double s_phi = 0.0;
    double s_joint_quadrature = 0.0;
    double s_joint_gaussian_closed_form = 0.0;
    double s_joint_correlation_form = 0.0;
    double s_cond_phi_given_theta = 0.0;
};

enum class QuadratureDomain
{
    Untruncated, // mu +- 8 sigma per axis
    Truncated    // theta in [-pi, pi], phi in [0, 2pi], no renormalisation
};

// 1/2 ln(2 pi e sigma^2)
double entropy_1d(double sigma);

// -int f ln f for N(0, sigma^2) by composite Gauss-Legendre over +-8 sigma.
double entropy_1d_quadrature(double sigma);

// Differential entropy of the joint density by nested composite
// Gauss-Legendre, doubling the panel count until successive estimates agree
// to 1e-4 nats. Throws QuadratureNonConvergent otherwise.
double joint_entropy_quadrature(const AnglePhaseModel &model, QuadratureDomain domain = QuadratureDomain::Untruncated);

// 1/2 ln((2 pi e)^2 s_t^2 s_p^2 (1 - rho^2))
double joint_entropy_closed_form(const AnglePhaseModel &model);

// Correlation-corrected sum -2 pi ln(1 - rho^2) + s_theta + s_phi, as stated
// for the angle/phase pair. Reported next to the quadrature value; the two do
// not agree in general.
double joint_entropy_correlation_form(double s_theta, double s_phi, double rho);

// S(phi | theta) = 1/2 ln(2 pi e (1 - rho^2) sigma_phi^2)
double conditional_entropy(const AnglePhaseModel &model);

EntropyReport entropy_report(const AnglePhaseModel &model);

// Re-estimation trigger: true when the joint entropy exceeds tau. An empty
// tau disables the trigger.
bool should_reestimate(const EntropyReport &report, std::optional<double> tau);

// Default trigger threshold: the joint entropy the model would have at rho = 0.
double default_entropy_threshold(const AnglePhaseModel &model);

} // namespace hmimo
