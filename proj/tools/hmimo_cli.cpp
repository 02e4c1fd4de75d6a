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

// Command-line front end: run, sweep, probe-complexity, validate.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "hmimo/config.hpp"
#include "hmimo/error.hpp"
#include "hmimo/results.hpp"
#include "hmimo/simulator.hpp"

namespace fs = std::filesystem;
using namespace hmimo;

namespace
{

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct Common
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::string out;
    std::string format = "csv";
    unsigned workers = 1;
    std::string debug_dump;
};

void add_common(CLI::App *cmd, Common &c, bool outputs)
{
    cmd->add_option("-c,--config", c.config, "Scenario file (defaults apply when omitted)")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "Override the master seed");
    cmd->add_option("--trials", c.trials, "Override n_trials");
    if (!outputs)
        return;
    cmd->add_option("-o,--out", c.out, "Output file");
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
    cmd->add_option("--debug-dump", c.debug_dump, "Directory for per-trial matrices and solver traces");
}

ParsedConfig load(const Common &c)
{
    ParsedConfig pc = c.config.empty() ? parse_config_string("") : parse_config(c.config);
    if (c.seed)
        pc.config.seed = *c.seed;
    if (c.trials)
        pc.config.n_trials = *c.trials;
    pc.config.validate();
    return pc;
}

OutputFormat format_of(const Common &c) { return c.format == "json" ? OutputFormat::Json : OutputFormat::Csv; }

std::string default_out(const Common &c, const std::string &stem)
{
    return c.out.empty() ? stem + (c.format == "json" ? ".json" : ".csv") : c.out;
}

void dump_trial(const fs::path &dir, std::size_t id, const TrialArtifacts &a)
{
    fs::create_directories(dir);
    const std::string base = "trial_" + std::to_string(id) + "_";
    {
        std::ofstream f(dir / (base + "f_rf.txt"));
        write_matrix_text(a.f_rf, f);
    }
    {
        std::ofstream f(dir / (base + "f_bb.txt"));
        write_matrix_text(a.f_bb, f);
    }
    {
        std::ofstream f(dir / (base + "w_rf.txt"));
        write_matrix_text(a.combiner.w_rf(), f);
    }
    std::ofstream f(dir / (base + "solver_trace.csv"));
    write_solver_trace(a.solver_trace, f);
}

int finish(const std::vector<MetricRecord> &records, const std::string &path, const Common &c,
           const ParsedConfig &pc, const std::string &started)
{
    RunManifest m;
    m.config_hash = config_hash(pc);
    m.seed = pc.config.seed;
    m.started_at = started;
    m = write_results(records, path, format_of(c), m);
    std::cout << "wrote " << records.size() << " records to " << path << " (config " << m.config_hash << ")\n";
    if (!m.failures.empty())
    {
        std::cerr << m.failures.size() << " trial(s) failed; see manifest\n";
        return kExitRuntime;
    }
    return 0;
}

int cmd_run(const Common &c)
{
    const std::string started = utc_timestamp();
    const ParsedConfig pc = load(c);
    std::vector<MetricRecord> records;
    if (c.debug_dump.empty())
        records = run_batch(pc.config, c.workers);
    else
        for (std::size_t t = 0; t < pc.config.n_trials; ++t)
        {
            TrialArtifacts a;
            records.push_back(run_trial(pc.config, t, &a));
            if (!records.back().failed)
                dump_trial(c.debug_dump, t, a);
        }
    return finish(records, default_out(c, "results"), c, pc, started);
}

// Built-in value grids used when the config has no [sweep.NAME] section.
std::optional<SweepSpec> builtin_sweep(const std::string &name)
{
    const auto fam = sweep_family_from_string(name);
    if (!fam)
        return std::nullopt;
    static const std::map<SweepFamily, std::vector<double>> grids{
        {SweepFamily::Spacing, {0.25, 0.5, 0.75, 1.0}},
        {SweepFamily::InterferenceVsDistance, {1, 2, 5, 10, 20, 50}},
        {SweepFamily::SnrSumRate, {0, 5, 10, 15, 20, 25, 30, 35}},
        {SweepFamily::MismatchSinr, {7, 13}},
        {SweepFamily::MismatchBer, {5, 8, 12}},
        {SweepFamily::EstErrorCdf, {0, 12}}};
    SweepSpec s;
    s.name = name;
    s.family = *fam;
    s.variable = std::string(default_variable(*fam));
    s.values = grids.at(*fam);
    return s;
}

int cmd_sweep(const Common &c, const std::string &name)
{
    const std::string started = utc_timestamp();
    const ParsedConfig pc = load(c);
    std::optional<SweepSpec> spec;
    for (const auto &s : pc.sweeps)
        if (s.name == name)
            spec = s;
    if (!spec)
        spec = builtin_sweep(name);
    if (!spec)
        throw Error(ErrorKind::ValidationError, "no sweep named '" + name + "' in config and no built-in family of that name");

    const SweepResult res = run_sweep(*spec, pc.config, c.workers);
    const std::string out = default_out(c, name);
    {
        std::ofstream f(out + ".summary.csv");
        write_sweep_summary(res, pc.config.bandwidth_mhz, f);
    }
    if (spec->family == SweepFamily::EstErrorCdf)
    {
        std::ofstream f(out + ".cdf.csv");
        write_cdf(res, f);
    }
    for (const auto &p : res.points)
        std::cout << res.variable << "=" << p.value << "  sum_rate=" << p.sum_rate.mean
                  << "  worst_sinr_db=" << p.worst_sinr_db.mean << "  ber=" << p.ber.mean
                  << "  est_error=" << p.est_error.mean << "  failed=" << p.n_failed << "\n";
    return finish(res.records, out, c, pc, started);
}

int cmd_probe(const Common &c, const std::vector<std::size_t> &n_tx, std::size_t per_point)
{
    const ParsedConfig pc = load(c);
    const ComplexityReport rep = complexity_probe(pc.config, n_tx, per_point);
    std::cout << "n_tx,seconds_per_trial\n";
    for (const auto &r : rep.rows)
        std::cout << r.n_tx << ',' << r.seconds_per_trial << '\n';
    std::cout << "loglog_slope," << (rep.slope ? std::to_string(*rep.slope) : std::string("n/a")) << '\n';
    return 0;
}

int cmd_validate(const Common &c)
{
    const ParsedConfig pc = load(c);
    std::cout << "ok " << config_hash(pc) << " (" << pc.sweeps.size() << " sweep(s))\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Hybrid precoding Monte-Carlo simulator"};
    app.set_version_flag("--version", HMIMO_VERSION);
    app.require_subcommand(1);

    Common c;
    std::string sweep_name;
    std::vector<std::size_t> n_tx_values{16, 32, 64};
    std::size_t per_point = 5;

    auto *run = app.add_subcommand("run", "Run n_trials trials of one scenario");
    add_common(run, c, true);
    auto *sweep = app.add_subcommand("sweep", "Run a named sweep from the config or a built-in family");
    add_common(sweep, c, true);
    sweep->add_option("name", sweep_name, "Sweep name")->required();
    auto *probe = app.add_subcommand("probe-complexity", "Time trials against the antenna count");
    add_common(probe, c, false);
    probe->add_option("--n-tx", n_tx_values, "Antenna counts")->delimiter(',');
    probe->add_option("--per-point", per_point, "Trials timed per antenna count");
    auto *validate = app.add_subcommand("validate", "Parse and check a config");
    add_common(validate, c, false);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try
    {
        if (*run)
            return cmd_run(c);
        if (*sweep)
            return cmd_sweep(c, sweep_name);
        if (*probe)
            return cmd_probe(c, n_tx_values, per_point);
        return cmd_validate(c);
    }
    catch (const Error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        const bool invalid = e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::ValidationError;
        return invalid ? kExitValidation : kExitRuntime;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
