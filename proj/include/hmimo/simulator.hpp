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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmimo/angle_phase.hpp"
#include "hmimo/combining.hpp"
#include "hmimo/metrics.hpp"
#include "hmimo/precoding.hpp"

namespace hmimo
{

struct EntropyTrigger
{
    enum class Mode
    {
        Auto, // threshold = joint entropy of the configured model at rho = 0
        Off,
        Fixed
    };
    Mode mode = Mode::Auto;
    double tau = 0.0; // nats, used when mode == Fixed
};

// Scenario parameters. Angles are radians here; the config file uses degrees.
struct SimConfig
{
    std::size_t n_tx = 64;
    std::size_t n_rf = 16;
    std::size_t n_rx = 2;
    std::size_t k_users = 8;
    std::size_t n_paths = 6;
    std::size_t streams_per_rf = 1;
    double spacing_wavelengths = 0.5;
    double p_max_db = 35.0;
    double sigma_n2 = 0.01;
    std::optional<double> snr_db; // when set, P_max = sigma_n2 * 10^(snr_db/10)
    double inr_db = -14.37;
    std::vector<double> interferer_angles{-7.0 * kPi / 180.0, 2.0 * kPi / 180.0, 12.0 * kPi / 180.0};
    double mismatch_theta = 0.0;
    double distance_m = 1.0;
    double path_loss_exponent = 0.4;
    double user_spread = 60.0 * kPi / 180.0; // users evenly spaced over +-spread/2 around mu_theta
    double carrier_ghz = 2.45;
    double bandwidth_mhz = 100.0;
    std::size_t ber_symbols = 20000;
    AnglePhaseModel model{8.0 * kPi / 180.0, 15.0 * kPi / 180.0, 5.0 * kPi / 180.0, 5.0 * kPi / 180.0, 0.5};
    std::size_t n_trials = 1000;
    std::uint64_t seed = 1;
    SolverOptions solver;
    EntropyTrigger entropy_trigger;

    // Linear P_max after the SNR / dB mapping.
    double p_max_linear() const;

    // Throws ValidationError naming the violated invariant.
    void validate() const;
};

enum class SweepFamily
{
    Spacing,
    InterferenceVsDistance,
    SnrSumRate,
    MismatchSinr,
    MismatchBer,
    EstErrorCdf
};

std::string_view to_string(SweepFamily f);
std::optional<SweepFamily> sweep_family_from_string(std::string_view s);
// Default swept variable per family.
std::string_view default_variable(SweepFamily f);

struct SweepSpec
{
    std::string name;
    SweepFamily family = SweepFamily::SnrSumRate;
    std::string variable;
    std::vector<double> values;
    std::vector<std::pair<std::string, double>> fixed; // scalar overrides applied before sweeping

    void validate() const;
};

// Sets a numeric scenario field by config key (angles in degrees). Returns
// false for an unknown key.
bool set_config_value(SimConfig &cfg, std::string_view key, double value);

// Matrices produced inside one trial, for debug dumps.
struct TrialArtifacts
{
    CMatrix f_rf;
    CMatrix f_bb;
    CombinerSet combiner;
    std::vector<IterationRecord> solver_trace;
    bool rank_deficient = false;
    bool reestimated = false;
};

// One Monte-Carlo realisation of the full pipeline. Deterministic in
// (cfg.seed, trial_index); module errors are caught and the record is tagged.
MetricRecord run_trial(const SimConfig &cfg, std::size_t trial_index, TrialArtifacts *artifacts = nullptr);

struct Summary
{
    double mean = 0.0;
    double median = 0.0;
    double p5 = 0.0;
    double p95 = 0.0;
};

struct SweepPoint
{
    double value = 0.0;
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
    Summary sum_rate;
    Summary worst_sinr_db;
    Summary interference_db;
    Summary ber;
    Summary est_error;
    std::vector<double> est_error_sorted; // filled for the CDF family
};

struct SweepResult
{
    std::string variable;
    std::vector<MetricRecord> records; // ordered by (value index, trial)
    std::vector<SweepPoint> points;
};

Summary summarize(std::vector<double> values);

// Runs cfg.n_trials trials per value. Trial seeds depend only on the trial
// index, so every sweep value sees the same channel draws.
SweepResult run_sweep(const SweepSpec &spec, const SimConfig &cfg, unsigned workers = 1);

// Plain batch of cfg.n_trials trials (no sweep variable).
std::vector<MetricRecord> run_batch(const SimConfig &cfg, unsigned workers = 1);

struct ComplexityRow
{
    std::size_t n_tx;
    double seconds_per_trial;
};

struct ComplexityReport
{
    std::vector<ComplexityRow> rows;
    std::optional<double> slope; // log-log least squares; empty for < 2 distinct n_tx
};

ComplexityReport complexity_probe(const SimConfig &cfg, const std::vector<std::size_t> &n_tx_values,
                                  std::size_t trials_per_point = 5);

std::optional<double> loglog_slope(const std::vector<ComplexityRow> &rows);

} // namespace hmimo
