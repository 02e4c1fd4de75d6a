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

#include "hmimo/results.hpp"
#include "hmimo/error.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>

#include <json.hpp>

namespace hmimo
{

namespace
{

using nlohmann::json;

std::string g9(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::ofstream open_out(const std::string &path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    return f;
}

json manifest_json(const RunManifest &m)
{
    json fails = json::array();
    for (const auto &f : m.failures)
        fails.push_back({{"trial_id", f.trial_id}, {"tag", f.tag}});
    return {{"config_hash", m.config_hash},
            {"seed", m.seed},
            {"artifact_version", m.artifact_version},
            {"started_at", m.started_at},
            {"finished_at", m.finished_at},
            {"output_paths", m.output_paths},
            {"snr_mapping", m.snr_mapping},
            {"n_records", m.n_records},
            {"failures", fails}};
}

RunManifest manifest_from_json(const json &j)
{
    RunManifest m;
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    m.output_paths = j.at("output_paths").get<std::vector<std::string>>();
    m.snr_mapping = j.value("snr_mapping", m.snr_mapping);
    m.n_records = j.at("n_records").get<std::size_t>();
    for (const auto &f : j.at("failures"))
        m.failures.push_back({f.at("trial_id").get<std::size_t>(), f.at("tag").get<std::string>()});
    return m;
}

json record_json(const MetricRecord &r)
{
    return {{"trial_id", r.trial_id},
            {"sweep_var", r.sweep_var},
            {"sweep_value", r.sweep_value},
            {"sum_rate_bpshz", r.sum_rate},
            {"per_user_sinr_db", r.per_user_sinr_db},
            {"worst_sinr_db", r.worst_case_sinr_db},
            {"interference_db", r.interference_db},
            {"ber", r.ber},
            {"est_error", r.est_error},
            {"s_theta", r.entropy.s_theta},
            {"s_phi", r.entropy.s_phi},
            {"s_joint_quad", r.entropy.s_joint_quadrature},
            {"s_joint_closed_form", r.entropy.s_joint_gaussian_closed_form},
            {"s_joint_eq21", r.entropy.s_joint_correlation_form},
            {"s_cond", r.entropy.s_cond_phi_given_theta},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"failed", r.failed},
            {"failure", r.failure}};
}

MetricRecord record_from_json(const json &j)
{
    MetricRecord r;
    r.trial_id = j.at("trial_id").get<std::size_t>();
    r.sweep_var = j.at("sweep_var").get<std::string>();
    r.sweep_value = j.at("sweep_value").get<double>();
    r.sum_rate = j.at("sum_rate_bpshz").get<double>();
    r.per_user_sinr_db = j.at("per_user_sinr_db").get<std::vector<double>>();
    r.worst_case_sinr_db = j.at("worst_sinr_db").get<double>();
    r.interference_db = j.at("interference_db").get<double>();
    r.ber = j.at("ber").get<double>();
    r.est_error = j.at("est_error").get<double>();
    r.entropy.s_theta = j.at("s_theta").get<double>();
    r.entropy.s_phi = j.at("s_phi").get<double>();
    r.entropy.s_joint_quadrature = j.at("s_joint_quad").get<double>();
    r.entropy.s_joint_gaussian_closed_form = j.at("s_joint_closed_form").get<double>();
    r.entropy.s_joint_correlation_form = j.at("s_joint_eq21").get<double>();
    r.entropy.s_cond_phi_given_theta = j.at("s_cond").get<double>();
    r.converged = j.at("converged").get<bool>();
    r.iterations = j.at("iterations").get<int>();
    r.failed = j.at("failed").get<bool>();
    r.failure = j.at("failure").get<std::string>();
    return r;
}

} // namespace

std::string utc_timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_csv(const std::vector<MetricRecord> &records, std::ostream &out)
{
    out << kCsvHeader << '\n';
    for (const auto &r : records)
    {
        out << r.trial_id << ',' << r.sweep_var << ',' << g9(r.sweep_value) << ',' << g9(r.sum_rate) << ','
            << g9(r.worst_case_sinr_db) << ',' << g9(r.interference_db) << ',' << g9(r.ber) << ','
            << g9(r.est_error) << ',' << g9(r.entropy.s_theta) << ',' << g9(r.entropy.s_phi) << ','
            << g9(r.entropy.s_joint_quadrature) << ',' << g9(r.entropy.s_joint_correlation_form) << ','
            << g9(r.entropy.s_cond_phi_given_theta) << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << '\n';
    }
}

RunManifest write_results(const std::vector<MetricRecord> &records, const std::string &path, OutputFormat format,
                          RunManifest manifest)
{
    manifest.n_records = records.size();
    manifest.failures.clear();
    for (const auto &r : records)
        if (r.failed)
            manifest.failures.push_back({r.trial_id, r.failure});
    if (manifest.finished_at.empty())
        manifest.finished_at = utc_timestamp();
    manifest.output_paths.push_back(path);

    if (format == OutputFormat::Csv)
    {
        const std::string side = path + ".manifest.json";
        manifest.output_paths.push_back(side);
        {
            auto f = open_out(path);
            write_csv(records, f);
            if (!f)
                throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
        }
        auto m = open_out(side);
        m << manifest_json(manifest).dump(2) << '\n';
        if (!m)
            throw Error(ErrorKind::IoError, "write failed for '" + side + "'");
        return manifest;
    }

    json doc{{"manifest", manifest_json(manifest)}, {"records", json::array()}};
    for (const auto &r : records)
        doc["records"].push_back(record_json(r));
    auto f = open_out(path);
    f << doc.dump(2) << '\n';
    if (!f)
        throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
    return manifest;
}

JsonResults read_json_results(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    JsonResults out;
    try
    {
        const json doc = json::parse(f);
        out.manifest = manifest_from_json(doc.at("manifest"));
        for (const auto &r : doc.at("records"))
            out.records.push_back(record_from_json(r));
    }
    catch (const json::exception &e)
    {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
    return out;
}

void write_sweep_summary(const SweepResult &result, double bandwidth_mhz, std::ostream &out)
{
    const char *metrics[] = {"sum_rate_bpshz", "sum_rate_gbps", "worst_sinr_db", "interference_db", "ber",
                             "est_error"};
    out << result.variable << ",n_ok,n_failed";
    for (const char *m : metrics)
        out << ',' << m << "_mean," << m << "_median," << m << "_p5," << m << "_p95";
    out << '\n';
    auto put = [&](const Summary &s, double scale = 1.0) {
        out << ',' << g9(s.mean * scale) << ',' << g9(s.median * scale) << ',' << g9(s.p5 * scale) << ','
            << g9(s.p95 * scale);
    };
    for (const auto &p : result.points)
    {
        out << g9(p.value) << ',' << p.n_ok << ',' << p.n_failed;
        put(p.sum_rate);
        put(p.sum_rate, bandwidth_mhz * 1e-3);
        put(p.worst_sinr_db);
        put(p.interference_db);
        put(p.ber);
        put(p.est_error);
        out << '\n';
    }
}

void write_cdf(const SweepResult &result, std::ostream &out)
{
    out << result.variable << ",rank,est_error,cdf\n";
    for (const auto &p : result.points)
    {
        const std::size_t n = p.est_error_sorted.size();
        for (std::size_t i = 0; i < n; ++i)
            out << g9(p.value) << ',' << i << ',' << g9(p.est_error_sorted[i]) << ','
                << g9(double(i + 1) / double(n)) << '\n';
    }
}

void write_matrix_text(const CMatrix &m, std::ostream &out)
{
    char buf[96];
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            std::snprintf(buf, sizeof buf, "%.17g%+.17gj", m(r, c).real(), m(r, c).imag());
            out << (c ? " " : "") << buf;
        }
        out << '\n';
    }
}

void write_solver_trace(const std::vector<IterationRecord> &trace, std::ostream &out)
{
    out << "iteration,objective,step,feasible\n";
    for (const auto &t : trace)
        out << t.iteration << ',' << g9(t.objective) << ',' << g9(t.step) << ',' << (t.feasible ? 1 : 0) << '\n';
}

} // namespace hmimo
