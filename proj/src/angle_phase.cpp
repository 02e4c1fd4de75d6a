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

#include "hmimo/angle_phase.hpp"
#include "hmimo/error.hpp"

#include <algorithm>
#include <cmath>

namespace hmimo
{

void AnglePhaseModel::validate() const
{
    const bool finite = std::isfinite(mu_theta) && std::isfinite(mu_phi) && std::isfinite(sigma_theta) &&
                        std::isfinite(sigma_phi) && std::isfinite(rho);
    if (!finite)
        throw Error(ErrorKind::InvalidModel, "non-finite model parameter");
    if (!(sigma_theta > 0.0) || !(sigma_phi > 0.0))
        throw Error(ErrorKind::InvalidModel, "standard deviations must be positive");
    if (!(std::abs(rho) < 1.0))
        throw Error(ErrorKind::InvalidModel, "|rho| must be strictly below 1");
}

double AnglePhaseModel::density(double theta, double phi) const
{
    const double one_m_r2 = 1.0 - rho * rho;
    const double zt = (theta - mu_theta) / sigma_theta;
    const double zp = (phi - mu_phi) / sigma_phi;
    const double q = (zt * zt - 2.0 * rho * zt * zp + zp * zp) / one_m_r2;
    return std::exp(-0.5 * q) / (2.0 * kPi * sigma_theta * sigma_phi * std::sqrt(one_m_r2));
}

double wrap_angle(double theta)
{
    double w = std::remainder(theta, 2.0 * kPi); // [-pi, pi]
    return w;
}

double wrap_phase(double phi)
{
    double w = std::fmod(phi, 2.0 * kPi);
    if (w < 0.0)
        w += 2.0 * kPi;
    return w;
}

std::vector<AnglePhaseSample> sample_angle_phase(const AnglePhaseModel &model, std::size_t n, Rng &rng)
{
    model.validate();
    if (n == 0)
        throw Error(ErrorKind::TooFewSamples, "sample count must be at least 1");

    std::normal_distribution<double> gauss(0.0, 1.0);
    const double c = std::sqrt(1.0 - model.rho * model.rho);
    std::vector<AnglePhaseSample> out(n);
    for (auto &s : out)
    {
        const double z1 = gauss(rng);
        const double z2 = gauss(rng);
        s.theta = model.sigma_theta * z1 + model.mu_theta;
        s.phi = model.sigma_phi * (model.rho * z1 + c * z2) + model.mu_phi;
    }
    return out;
}

ConditionalMoments conditional_moments(const AnglePhaseModel &model, double theta)
{
    model.validate();
    return {model.mu_phi + model.rho * model.sigma_phi * (theta - model.mu_theta) / model.sigma_theta,
            (1.0 - model.rho * model.rho) * model.sigma_phi * model.sigma_phi};
}

MleFit fit_mle(std::span<const AnglePhaseSample> samples)
{
    const std::size_t n = samples.size();
    if (n < 2)
        throw Error(ErrorKind::TooFewSamples, "MLE needs at least two samples");

    double mt = 0.0, mp = 0.0;
    for (const auto &s : samples)
    {
        mt += s.theta;
        mp += s.phi;
    }
    mt /= double(n);
    mp /= double(n);

    double stt = 0.0, spp = 0.0, stp = 0.0;
    for (const auto &s : samples)
    {
        const double dt = s.theta - mt;
        const double dp = s.phi - mp;
        stt += dt * dt;
        spp += dp * dp;
        stp += dt * dp;
    }
    const double var_t = stt / double(n - 1);
    const double var_p = spp / double(n - 1);
    if (!(var_t > 0.0) || !(var_p > 0.0))
        throw Error(ErrorKind::DegenerateVariance, "zero sample spread");

    MleFit fit;
    fit.sample_cov = stp / double(n);
    fit.model.mu_theta = mt;
    fit.model.mu_phi = mp;
    fit.model.sigma_theta = std::sqrt(var_t);
    fit.model.sigma_phi = std::sqrt(var_p);
    constexpr double eps = 1e-9;
    const double r = fit.sample_cov / (fit.model.sigma_theta * fit.model.sigma_phi);
    fit.model.rho = std::clamp(r, -1.0 + eps, 1.0 - eps);
    return fit;
}

} // namespace hmimo
