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

#include "hmimo/config.hpp"
#include "hmimo/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hmimo
{

namespace
{

constexpr double kDeg = kPi / 180.0;

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Cursor
{
    const std::string &source;
    std::size_t line;

    [[noreturn]] void fail(const std::string &msg) const
    {
        throw Error(ErrorKind::ParseError, source + ":" + std::to_string(line) + ": " + msg);
    }
};

double parse_number(const std::string &s, const Cursor &at, const std::string &key)
{
    double v = 0.0;
    const char *end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v))
        at.fail("key '" + key + "': expected a number, got '" + s + "'");
    return v;
}

bool is_list(const std::string &v) { return v.size() >= 2 && v.front() == '[' && v.back() == ']'; }

std::vector<double> parse_list(const std::string &v, const Cursor &at, const std::string &key)
{
    if (!is_list(v))
        at.fail("key '" + key + "': expected a list [a, b, ...]");
    std::vector<double> out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (item.empty())
        {
            if (out.empty() && ss.eof())
                break;
            at.fail("key '" + key + "': empty list element");
        }
        out.push_back(parse_number(item, at, key));
    }
    return out;
}

std::string unquote(const std::string &v)
{
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
        return v.substr(1, v.size() - 2);
    return v;
}

// Decimal degrees that map back onto `rad` exactly under the parser's scaling.
double exact_degrees(double rad)
{
    double d = rad / kDeg;
    for (int i = 0; i < 8 && d * kDeg != rad; ++i)
        d = std::nextafter(d, d * kDeg < rad ? INFINITY : -INFINITY);
    return d;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double> &v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + fmt(v[i]);
    return s + "]";
}

void apply_top(ParsedConfig &pc, const std::string &key, const std::string &val, const Cursor &at)
{
    SimConfig &c = pc.config;
    if (key == "snr_db" && is_list(val))
    {
        SweepSpec s;
        s.name = "snr_db";
        s.family = SweepFamily::SnrSumRate;
        s.variable = "snr_db";
        s.values = parse_list(val, at, key);
        pc.sweeps.push_back(std::move(s));
        return;
    }
    if (key == "interferer_angles_deg")
    {
        c.interferer_angles.clear();
        for (double d : parse_list(val, at, key))
            c.interferer_angles.push_back(d * kDeg);
        return;
    }
    if (key == "seed")
    {
        std::uint64_t s = 0;
        const auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), s);
        if (ec != std::errc() || p != val.data() + val.size())
            at.fail("key 'seed': expected an unsigned 64-bit integer");
        c.seed = s;
        return;
    }
    if (key == "p_max_db")
    {
        c.p_max_db = parse_number(val, at, key);
        return;
    }
    static const std::vector<std::string> allowed{
        "n_tx",        "n_rf",         "n_rx",          "k_users",      "n_paths",          "streams_per_rf",
        "n_trials",    "ber_symbols",  "spacing_wavelengths", "p_max_db", "sigma_n2",       "snr_db",
        "inr_db",      "mismatch_theta_deg", "distance_m", "path_loss_exponent", "user_spread_deg",
        "carrier_ghz", "bandwidth_mhz"};
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        at.fail("unknown key '" + key + "'");
    try
    {
        set_config_value(c, key, parse_number(val, at, key));
    }
    catch (const Error &e)
    {
        if (e.kind() == ErrorKind::ParseError)
            throw;
        at.fail(e.what());
    }
}

void apply_section(ParsedConfig &pc, const std::string &section, const std::string &key, const std::string &val,
                   const Cursor &at)
{
    if (section == "entropy")
    {
        if (key != "trigger_tau")
            at.fail("unknown key 'entropy." + key + "'");
        const std::string v = unquote(val);
        if (v == "off")
            pc.config.entropy_trigger = {EntropyTrigger::Mode::Off, 0.0};
        else if (v == "auto")
            pc.config.entropy_trigger = {EntropyTrigger::Mode::Auto, 0.0};
        else
            pc.config.entropy_trigger = {EntropyTrigger::Mode::Fixed, parse_number(v, at, key)};
        return;
    }
    if (section == "model" || section == "solver")
    {
        static const std::vector<std::string> model_keys{"mu_theta_deg", "mu_phi_deg", "sigma_theta_deg",
                                                         "sigma_phi_deg", "rho"};
        static const std::vector<std::string> solver_keys{"step0", "shrink", "tol", "max_iter"};
        const auto &keys = section == "model" ? model_keys : solver_keys;
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            at.fail("unknown key '" + section + "." + key + "'");
        try
        {
            set_config_value(pc.config, section + "." + key, parse_number(val, at, key));
        }
        catch (const Error &e)
        {
            if (e.kind() == ErrorKind::ParseError)
                throw;
            at.fail(e.what());
        }
        return;
    }
    if (section.rfind("sweep.", 0) == 0)
    {
        const std::string name = section.substr(6);
        auto it = std::find_if(pc.sweeps.begin(), pc.sweeps.end(), [&](const SweepSpec &s) { return s.name == name; });
        SweepSpec &s = *it;
        if (key == "family")
        {
            const auto f = sweep_family_from_string(unquote(val));
            if (!f)
                at.fail("unknown sweep family '" + unquote(val) + "'");
            s.family = *f;
            if (s.variable.empty())
                s.variable = std::string(default_variable(*f));
        }
        else if (key == "variable")
            s.variable = unquote(val);
        else if (key == "values")
            s.values = parse_list(val, at, key);
        else
        {
            SimConfig probe;
            if (!set_config_value(probe, key, parse_number(val, at, key)))
                at.fail("unknown key '" + section + "." + key + "'");
            s.fixed.emplace_back(key, parse_number(val, at, key));
        }
        return;
    }
    at.fail("unknown section [" + section + "]");
}

} // namespace

ParsedConfig parse_config_string(std::string_view text, const std::string &source)
{
    ParsedConfig pc;
    std::string section;
    std::map<std::string, std::size_t> seen;
    std::stringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw))
    {
        ++lineno;
        const Cursor at{source, lineno};
        std::string line = raw;
        if (const auto h = line.find('#'); h != std::string::npos)
            line.resize(h);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos)
        {
            section = trim(line.substr(1, line.size() - 2));
            if (section.rfind("sweep.", 0) == 0)
            {
                const std::string name = section.substr(6);
                if (name.empty())
                    at.fail("sweep section needs a name");
                if (std::any_of(pc.sweeps.begin(), pc.sweeps.end(), [&](auto &s) { return s.name == name; }))
                    at.fail("duplicate sweep '" + name + "'");
                SweepSpec s;
                s.name = name;
                s.family = SweepFamily::SnrSumRate;
                pc.sweeps.push_back(std::move(s));
            }
            else if (section != "model" && section != "solver" && section != "entropy")
                at.fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            at.fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            at.fail("expected key = value");
        const std::string full = section.empty() ? key : section + "." + key;
        if (seen.count(full))
            at.fail("duplicate key '" + full + "' (first on line " + std::to_string(seen[full]) + ")");
        seen[full] = lineno;
        if (section.empty())
            apply_top(pc, key, val, at);
        else
            apply_section(pc, section, key, val, at);
    }
    for (auto &s : pc.sweeps)
        if (s.variable.empty())
            s.variable = std::string(default_variable(s.family));

    pc.config.validate();
    for (const auto &s : pc.sweeps)
        s.validate();
    return pc;
}

ParsedConfig parse_config(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw Error(ErrorKind::IoError, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_string(ss.str(), path);
}

std::string write_config(const ParsedConfig &pc)
{
    const SimConfig &c = pc.config;
    std::ostringstream o;
    o << "n_tx = " << c.n_tx << "\n"
      << "n_rf = " << c.n_rf << "\n"
      << "n_rx = " << c.n_rx << "\n"
      << "k_users = " << c.k_users << "\n"
      << "n_paths = " << c.n_paths << "\n"
      << "streams_per_rf = " << c.streams_per_rf << "\n"
      << "spacing_wavelengths = " << fmt(c.spacing_wavelengths) << "\n"
      << "p_max_db = " << fmt(c.p_max_db) << "\n"
      << "sigma_n2 = " << fmt(c.sigma_n2) << "\n";
    const bool snr_sweep = std::any_of(pc.sweeps.begin(), pc.sweeps.end(), [](auto &s) { return s.name == "snr_db"; });
    if (c.snr_db && !snr_sweep)
        o << "snr_db = " << fmt(*c.snr_db) << "\n";
    std::vector<double> ang;
    for (double a : c.interferer_angles)
        ang.push_back(exact_degrees(a));
    o << "inr_db = " << fmt(c.inr_db) << "\n"
      << "interferer_angles_deg = " << fmt_list(ang) << "\n"
      << "mismatch_theta_deg = " << fmt(exact_degrees(c.mismatch_theta)) << "\n"
      << "distance_m = " << fmt(c.distance_m) << "\n"
      << "path_loss_exponent = " << fmt(c.path_loss_exponent) << "\n"
      << "user_spread_deg = " << fmt(exact_degrees(c.user_spread)) << "\n"
      << "carrier_ghz = " << fmt(c.carrier_ghz) << "\n"
      << "bandwidth_mhz = " << fmt(c.bandwidth_mhz) << "\n"
      << "ber_symbols = " << c.ber_symbols << "\n"
      << "n_trials = " << c.n_trials << "\n"
      << "seed = " << c.seed << "\n";
    for (const auto &s : pc.sweeps)
        if (s.name == "snr_db")
            o << "snr_db = " << fmt_list(s.values) << "\n";

    o << "\n[model]\n"
      << "mu_theta_deg = " << fmt(exact_degrees(c.model.mu_theta)) << "\n"
      << "mu_phi_deg = " << fmt(exact_degrees(c.model.mu_phi)) << "\n"
      << "sigma_theta_deg = " << fmt(exact_degrees(c.model.sigma_theta)) << "\n"
      << "sigma_phi_deg = " << fmt(exact_degrees(c.model.sigma_phi)) << "\n"
      << "rho = " << fmt(c.model.rho) << "\n";
    o << "\n[solver]\n"
      << "step0 = " << fmt(c.solver.step0) << "\n"
      << "shrink = " << fmt(c.solver.shrink) << "\n"
      << "tol = " << fmt(c.solver.tol) << "\n"
      << "max_iter = " << c.solver.max_iter << "\n";
    o << "\n[entropy]\ntrigger_tau = ";
    switch (c.entropy_trigger.mode)
    {
    case EntropyTrigger::Mode::Auto: o << "auto"; break;
    case EntropyTrigger::Mode::Off: o << "off"; break;
    case EntropyTrigger::Mode::Fixed: o << fmt(c.entropy_trigger.tau); break;
    }
    o << "\n";

    std::vector<const SweepSpec *> named;
    for (const auto &s : pc.sweeps)
        if (s.name != "snr_db")
            named.push_back(&s);
    std::sort(named.begin(), named.end(), [](auto *a, auto *b) { return a->name < b->name; });
    for (const SweepSpec *s : named)
    {
        o << "\n[sweep." << s->name << "]\n"
          << "family = \"" << to_string(s->family) << "\"\n"
          << "variable = \"" << s->variable << "\"\n"
          << "values = " << fmt_list(s->values) << "\n";
        auto fixed = s->fixed;
        std::stable_sort(fixed.begin(), fixed.end(), [](auto &a, auto &b) { return a.first < b.first; });
        for (const auto &[k, v] : fixed)
            o << k << " = " << fmt(v) << "\n";
    }
    return o.str();
}

std::string config_hash(const ParsedConfig &cfg)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : write_config(cfg))
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace hmimo
