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

#include <functional>
#include <vector>

namespace hmimo
{

struct GaussRule
{
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule via Newton iteration on P_n.
GaussRule gauss_legendre(int n);

// Composite rule: `panels` equal panels on [a, b], each with `rule`.
double integrate_1d(const std::function<double(double)> &f, double a, double b, int panels, const GaussRule &rule);

// Tensor-product composite rule on [ax, bx] x [ay, by].
double integrate_2d(const std::function<double(double, double)> &f, double ax, double bx, double ay, double by,
                    int panels, const GaussRule &rule);

} // namespace hmimo
