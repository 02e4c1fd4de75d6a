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

#include "hmimo/channel.hpp"
#include "hmimo/error.hpp"

#include <cmath>

namespace hmimo
{

void PathSet::validate() const
{
    const std::size_t n = gains.size();
    if (n == 0)
        throw Error(ErrorKind::InvalidGeometry, "path set is empty");
    if (thetas.size() != n || phis.size() != n)
        throw Error(ErrorKind::InvalidGeometry, "path arrays differ in length");
    if (1 + n_reflected + n_diffracted + n_scattered != n)
        throw Error(ErrorKind::InvalidGeometry, "composition does not add up to the path count");
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!std::isfinite(gains[i].real()) || !std::isfinite(gains[i].imag()) || !std::isfinite(thetas[i]) ||
            !std::isfinite(phis[i]))
            throw Error(ErrorKind::InvalidGeometry, "non-finite path parameter");
    }
}

CVector array_response(double theta, double phi, std::size_t n_elements, double spacing_wavelengths)
{
    if (n_elements == 0)
        throw Error(ErrorKind::InvalidGeometry, "array needs at least one element");
    if (!(spacing_wavelengths > 0.0) || !std::isfinite(spacing_wavelengths))
        throw Error(ErrorKind::InvalidGeometry, "element spacing must be positive");

    const double s = std::sin(theta);
    const double k0 = 2.0 * kPi * spacing_wavelengths * s * std::cos(phi);
    const double k1 = 2.0 * kPi * spacing_wavelengths * s * std::sin(phi);
    CVector a(static_cast<Eigen::Index>(n_elements));
    a(0) = std::polar(1.0, k0);
    for (std::size_t m = 1; m < n_elements; ++m)
        a(static_cast<Eigen::Index>(m)) = std::polar(1.0, k1 * double(m));
    return a;
}

CMatrix synthesize_matrix(const PathSet &paths, std::size_t n_rx, std::size_t n_tx, double spacing,
                          double theta_offset)
{
    paths.validate();
    if (n_rx == 0 || n_tx == 0)
        throw Error(ErrorKind::InvalidGeometry, "antenna counts must be positive");

    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx));
    for (std::size_t n = 0; n < paths.n_paths(); ++n)
    {
        const double th = paths.thetas[n] + theta_offset;
        const CVector a_rx = array_response(th, paths.phis[n], n_rx, spacing);
        const CVector a_tx = array_response(th, paths.phis[n], n_tx, spacing);
        h.noalias() += paths.gains[n] * a_rx * a_tx.adjoint();
    }
    return h;
}

ChannelRealization synthesize_channel(const PathSet &paths, std::size_t n_rx, std::size_t n_tx, double spacing,
                                      double mismatch_theta)
{
    ChannelRealization out;
    out.h_true = synthesize_matrix(paths, n_rx, n_tx, spacing);
    out.h_est = mismatch_theta == 0.0 ? out.h_true : synthesize_matrix(paths, n_rx, n_tx, spacing, mismatch_theta);
    out.paths = paths;
    out.mismatch_theta = mismatch_theta;
    return out;
}

CMatrix rayleigh_iid(std::size_t n_rx, std::size_t n_tx, double sigma2, Rng &rng)
{
    if (!(sigma2 > 0.0))
        throw Error(ErrorKind::InvalidGeometry, "variance must be positive");
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * sigma2));
    CMatrix h(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx));
    for (Eigen::Index j = 0; j < h.cols(); ++j)
        for (Eigen::Index i = 0; i < h.rows(); ++i)
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            h(i, j) = {re, im};
        }
    return h;
}

PathDraw draw_paths(const AnglePhaseModel &model, std::size_t n_paths, Rng &rng, double theta_offset,
                    double amplitude)
{
    PathDraw out;
    out.raw = sample_angle_phase(model, n_paths, rng);

    PathSet &p = out.paths;
    const std::size_t rest = n_paths - 1;
    p.n_reflected = (rest + 2) / 3;
    p.n_diffracted = (rest + 1) / 3;
    p.n_scattered = rest / 3;

    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 / double(n_paths)));
    p.gains.reserve(n_paths);
    p.gains.push_back(std::polar(amplitude / std::sqrt(double(n_paths)), phase(rng)));
    for (std::size_t n = 1; n < n_paths; ++n)
    {
        const double re = gauss(rng);
        const double im = gauss(rng);
        p.gains.push_back(amplitude * cplx(re, im));
    }
    for (const auto &s : out.raw)
    {
        p.thetas.push_back(wrap_angle(s.theta + theta_offset));
        p.phis.push_back(wrap_phase(s.phi));
    }
    return out;
}

double path_loss_amplitude(double distance, double exponent)
{
    if (!(distance > 0.0))
        throw Error(ErrorKind::InvalidGeometry, "distance must be positive");
    return std::pow(distance, -0.5 * exponent);
}

} // namespace hmimo
