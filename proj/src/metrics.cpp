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

#include "hmimo/metrics.hpp"
#include "hmimo/error.hpp"

#include <cmath>

namespace hmimo
{

double per_user_rate(double signal, double interference, double noise)
{
    if (!(noise > 0.0))
        throw Error(ErrorKind::NonPositiveNoise, "noise power must be positive");
    return std::log2(1.0 + signal / (interference + noise));
}

double estimation_error(const CMatrix &h_true, const CMatrix &h_est)
{
    if (h_true.rows() != h_est.rows() || h_true.cols() != h_est.cols())
        throw Error(ErrorKind::DimensionMismatch, "channel shapes differ");
    const double ref = h_true.norm();
    if (!(ref > 0.0))
        throw Error(ErrorKind::ZeroChannel, "true channel has zero norm");
    return (h_est - h_true).norm() / ref;
}

double qpsk_ber(double sinr_linear, std::size_t n_symbols, Rng &rng)
{
    if (n_symbols == 0)
        throw Error(ErrorKind::TooFewSamples, "need at least one symbol");
    if (!(sinr_linear >= 0.0))
        throw Error(ErrorKind::ValidationError, "SINR must be non-negative");

    // Unit-energy noise per complex dimension split evenly over I and Q; the
    // per-rail amplitude sqrt(sinr/2) gives bit error probability Q(sqrt(sinr)).
    const double amp = std::sqrt(0.5 * sinr_linear);
    std::normal_distribution<double> noise(0.0, std::sqrt(0.5));
    std::bernoulli_distribution bit(0.5);
    std::size_t errors = 0;
    for (std::size_t s = 0; s < n_symbols; ++s)
    {
        for (int rail = 0; rail < 2; ++rail)
        {
            const bool b = bit(rng);
            const double y = (b ? amp : -amp) + noise(rng);
            if ((y >= 0.0) != b)
                ++errors;
        }
    }
    return double(errors) / double(2 * n_symbols);
}

double q_function(double x)
{
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double to_db(double power, double floor_db)
{
    if (!(power > 0.0))
        return floor_db;
    return std::max(10.0 * std::log10(power), floor_db);
}

double from_db(double db)
{
    return std::pow(10.0, db / 10.0);
}

double interference_power_db(std::span<const CVector> combiners, const std::vector<std::vector<CVector>> &channels,
                             std::span<const double> powers, double floor_db)
{
    if (channels.size() != combiners.size())
        throw Error(ErrorKind::DimensionMismatch, "one interferer channel list per combiner is required");
    double total = 0.0;
    for (std::size_t k = 0; k < combiners.size(); ++k)
    {
        if (channels[k].size() != powers.size())
            throw Error(ErrorKind::DimensionMismatch, "interferer powers and channels differ in count");
        for (std::size_t l = 0; l < powers.size(); ++l)
        {
            if (channels[k][l].size() != combiners[k].size())
                throw Error(ErrorKind::DimensionMismatch, "interferer channel length differs from combiner");
            total += powers[l] * std::norm(combiners[k].dot(channels[k][l]));
        }
    }
    return to_db(total, floor_db);
}

} // namespace hmimo
