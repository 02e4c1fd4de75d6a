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

#include <iosfwd>
#include <string>
#include <vector>

#include "hmimo/combining.hpp"
#include "hmimo/metrics.hpp"
#include "hmimo/simulator.hpp"

namespace hmimo
{

inline constexpr const char *kCsvHeader = "trial_id,sweep_var,sweep_value,sum_rate_bpshz,worst_sinr_db,interference_db,"
                                          "ber,est_error,s_theta,s_phi,s_joint_quad,s_joint_eq21,s_cond,converged,"
                                          "iterations";

enum class OutputFormat
{
    Csv,
    Json
};

struct FailedTrial
{
    std::size_t trial_id;
    std::string tag;
};

struct RunManifest
{
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string artifact_version = HMIMO_VERSION;
    std::string started_at;  // ISO 8601 UTC
    std::string finished_at; // ISO 8601 UTC
    std::vector<std::string> output_paths;
    std::string snr_mapping = "p_max = sigma_n2 * 10^(snr_db/10)";
    std::size_t n_records = 0;
    std::vector<FailedTrial> failures;
};

std::string utc_timestamp();

// One CSV line per record (no trailing newline handling beyond '\n').
void write_csv(const std::vector<MetricRecord> &records, std::ostream &out);

// Writes records to `path`. CSV output gets a `<path>.manifest.json` sidecar;
// JSON output embeds the manifest. Throws IoError.
RunManifest write_results(const std::vector<MetricRecord> &records, const std::string &path, OutputFormat format,
                          RunManifest manifest);

struct JsonResults
{
    RunManifest manifest;
    std::vector<MetricRecord> records;
};

JsonResults read_json_results(const std::string &path);

// Per-value aggregate table: value, counts, then mean/median/p5/p95 per metric.
void write_sweep_summary(const SweepResult &result, double bandwidth_mhz, std::ostream &out);

// Sorted estimation-error samples, one row per (value, rank).
void write_cdf(const SweepResult &result, std::ostream &out);

// Text matrix dump: one row per line, cells `re+imj` separated by spaces.
void write_matrix_text(const CMatrix &m, std::ostream &out);

// iteration,objective,step,feasible
void write_solver_trace(const std::vector<IterationRecord> &trace, std::ostream &out);

} // namespace hmimo
