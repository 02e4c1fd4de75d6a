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
#include <string>
#include <vector>

#include "hmimo/entropy.hpp"
#include "hmimo/linalg.hpp"
#include "hmimo/rng.hpp"

namespace hmimo
{

inline constexpr double kDbFloor = -120.0;

// log2(1 + signal / (interference + noise)), bits/s/Hz.
double per_user_rate(double signal, double interference, double noise);

// ||h_est - h_true||_F / ||h_true||_F. Throws ZeroChannel for a zero h_true.
double estimation_error(const CMatrix &h_true, const CMatrix &h_est);

// Monte-Carlo bit error rate of Gray-coded QPSK with coherent detection at
// symbol SINR `sinr_linear` (per-bit Eb/N0 = sinr / 2).
double qpsk_ber(double sinr_linear, std::size_t n_symbols, Rng &rng);

// Gaussian tail probability.
double q_function(double x);

// 10 log10(x), floored.
double to_db(double power, double floor_db = kDbFloor);
double from_db(double db);

// Post-combining interference from single-antenna external transmitters:
// sum_k sum_l p_l |w_k^H h_{k,l}|^2 in dB. `channels[k][l]` is the receive
// vector from interferer l at user k.
double interference_power_db(std::span<const CVector> combiners, const std::vector<std::vector<CVector>> &channels,
                             std::span<const double> powers, double floor_db = kDbFloor);

struct MetricRecord
{
    std::size_t trial_id = 0;
    std::string sweep_var;
    double sweep_value = 0.0;
    double sum_rate = 0.0; // bits/s/Hz
    std::vector<double> per_user_sinr_db;
    double worst_case_sinr_db = 0.0;
    double interference_db = kDbFloor;
    double ber = 0.0;
    double est_error = 0.0;
    EntropyReport entropy;
    bool converged = false;
    int iterations = 0;
    bool failed = false;
    std::string failure;
};

} // namespace hmimo
