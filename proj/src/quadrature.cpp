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

#include "hmimo/quadrature.hpp"
#include "hmimo/angle_phase.hpp"

#include <cmath>
#include <stdexcept>

namespace hmimo
{

GaussRule gauss_legendre(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: n must be positive");

    GaussRule r{std::vector<double>(n), std::vector<double>(n)};
    const int m = (n + 1) / 2;
    for (int i = 1; i <= m; ++i)
    {
        double z = std::cos(kPi * (i - 0.25) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it)
        {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j)
            {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15)
                break;
        }
        r.nodes[i - 1] = -z;
        r.nodes[n - i] = z;
        r.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.weights[n - i] = r.weights[i - 1];
    }
    return r;
}

double integrate_1d(const std::function<double(double)> &f, double a, double b, int panels, const GaussRule &rule)
{
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p)
    {
        const double mid = a + (p + 0.5) * h;
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

double integrate_2d(const std::function<double(double, double)> &f, double ax, double bx, double ay, double by,
                    int panels, const GaussRule &rule)
{
    // Flatten the composite abscissae once per axis.
    const std::size_t q = rule.nodes.size();
    auto abscissae = [&](double a, double b, std::vector<double> &x, std::vector<double> &w) {
        const double h = (b - a) / panels;
        x.resize(panels * q);
        w.resize(panels * q);
        for (int p = 0; p < panels; ++p)
        {
            const double mid = a + (p + 0.5) * h;
            for (std::size_t i = 0; i < q; ++i)
            {
                x[p * q + i] = mid + 0.5 * h * rule.nodes[i];
                w[p * q + i] = 0.5 * h * rule.weights[i];
            }
        }
    };
    std::vector<double> xs, wx, ys, wy;
    abscissae(ax, bx, xs, wx);
    abscissae(ay, by, ys, wy);

    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        double row = 0.0;
        for (std::size_t j = 0; j < ys.size(); ++j)
            row += wy[j] * f(xs[i], ys[j]);
        total += wx[i] * row;
    }
    return total;
}

} // namespace hmimo
