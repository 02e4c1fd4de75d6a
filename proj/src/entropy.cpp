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

#include "hmimo/entropy.hpp"
#include "hmimo/error.hpp"
#include "hmimo/quadrature.hpp"

#include <cmath>

namespace hmimo
{

namespace
{

constexpr double kTwoPiE = 2.0 * kPi * 2.718281828459045235360;
constexpr int kRuleOrder = 16;
constexpr int kFirstPanels = 8;
constexpr int kMaxPanels = 256;
constexpr double kRefineTol = 1e-4;

const GaussRule &rule16()
{
    static const GaussRule r = gauss_legendre(kRuleOrder);
    return r;
}

} // namespace

double entropy_1d(double sigma)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw Error(ErrorKind::InvalidSigma, "sigma must be positive");
    return 0.5 * std::log(kTwoPiE * sigma * sigma);
}

double entropy_1d_quadrature(double sigma)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw Error(ErrorKind::InvalidSigma, "sigma must be positive");
    const double log_norm = std::log(sigma * std::sqrt(2.0 * kPi));
    auto integrand = [&](double x) {
        const double q = (x / sigma) * (x / sigma);
        const double f = std::exp(-0.5 * q - log_norm);
        return f * (0.5 * q + log_norm);
    };
    return integrate_1d(integrand, -8.0 * sigma, 8.0 * sigma, 64, rule16());
}

double joint_entropy_quadrature(const AnglePhaseModel &model, QuadratureDomain domain)
{
    model.validate();
    const double one_m_r2 = 1.0 - model.rho * model.rho;
    const double log_norm = std::log(2.0 * kPi * model.sigma_theta * model.sigma_phi * std::sqrt(one_m_r2));

    // -f ln f = f * (q/2 + log_norm) with f = exp(-q/2 - log_norm)
    auto integrand = [&](double theta, double phi) {
        const double zt = (theta - model.mu_theta) / model.sigma_theta;
        const double zp = (phi - model.mu_phi) / model.sigma_phi;
        const double q = (zt * zt - 2.0 * model.rho * zt * zp + zp * zp) / one_m_r2;
        const double e = 0.5 * q + log_norm;
        return std::exp(-e) * e;
    };

    double ax, bx, ay, by;
    if (domain == QuadratureDomain::Untruncated)
    {
        ax = model.mu_theta - 8.0 * model.sigma_theta;
        bx = model.mu_theta + 8.0 * model.sigma_theta;
        ay = model.mu_phi - 8.0 * model.sigma_phi;
        by = model.mu_phi + 8.0 * model.sigma_phi;
    }
    else
    {
        ax = -kPi;
        bx = kPi;
        ay = 0.0;
        by = 2.0 * kPi;
    }

    double prev = integrate_2d(integrand, ax, bx, ay, by, kFirstPanels, rule16());
    for (int panels = 2 * kFirstPanels; panels <= kMaxPanels; panels *= 2)
    {
        const double next = integrate_2d(integrand, ax, bx, ay, by, panels, rule16());
        if (std::abs(next - prev) < kRefineTol)
            return next;
        prev = next;
    }
    throw Error(ErrorKind::QuadratureNonConvergent, "joint entropy did not settle within the panel budget");
}

double joint_entropy_closed_form(const AnglePhaseModel &model)
{
    model.validate();
    return 0.5 * std::log(kTwoPiE * kTwoPiE * model.sigma_theta * model.sigma_theta * model.sigma_phi *
                          model.sigma_phi * (1.0 - model.rho * model.rho));
}

double joint_entropy_correlation_form(double s_theta, double s_phi, double rho)
{
    if (!(std::abs(rho) < 1.0))
        throw Error(ErrorKind::InvalidRho, "|rho| must be strictly below 1");
    return -2.0 * kPi * std::log(1.0 - rho * rho) + s_theta + s_phi;
}

double conditional_entropy(const AnglePhaseModel &model)
{
    model.validate();
    return 0.5 * std::log(kTwoPiE * (1.0 - model.rho * model.rho) * model.sigma_phi * model.sigma_phi);
}

EntropyReport entropy_report(const AnglePhaseModel &model)
{
    EntropyReport r;
    r.s_theta = entropy_1d(model.sigma_theta);
    r.s_phi = entropy_1d(model.sigma_phi);
    r.s_joint_quadrature = joint_entropy_quadrature(model);
    r.s_joint_gaussian_closed_form = joint_entropy_closed_form(model);
    r.s_joint_correlation_form = joint_entropy_correlation_form(r.s_theta, r.s_phi, model.rho);
    r.s_cond_phi_given_theta = conditional_entropy(model);
    return r;
}

bool should_reestimate(const EntropyReport &report, std::optional<double> tau)
{
    return tau.has_value() && report.s_joint_quadrature > *tau;
}

double default_entropy_threshold(const AnglePhaseModel &model)
{
    return entropy_1d(model.sigma_theta) + entropy_1d(model.sigma_phi);
}

} // namespace hmimo
