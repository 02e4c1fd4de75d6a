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

#include "hmimo/simulator.hpp"
#include "hmimo/channel.hpp"
#include "hmimo/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace hmimo
{

namespace
{

constexpr double kDeg = kPi / 180.0;

// Child-stream identifiers within a trial.
enum Stream : std::uint64_t
{
    kPathStream = 0,
    kBerStream = 1,
    kPilotStream = 2
};

CMatrix noise_covariance(std::size_t k, double sigma_n2)
{
    return sigma_n2 * CMatrix::Identity(Eigen::Index(k), Eigen::Index(k));
}

CombinerSet unit_norm(const CombinerSet &w)
{
    CombinerSet out = w;
    for (auto &b : out.w_blocks)
    {
        const double n = b.norm();
        if (n > 0.0)
            b /= n;
    }
    return out;
}

// Digital precoder for fixed analog precoder and combiners. The per-stream
// power is folded into the effective channel so the regularisation tracks SNR.
PrecoderSet build_precoder(const CMatrix &f_rf, const CombinerSet &combiner, std::span<const CMatrix> h_est,
                           const RVector &p_tr, const SimConfig &cfg)
{
    const std::size_t k = cfg.k_users;
    const CMatrix h_eq = equivalent_channel(unit_norm(combiner), h_est);
    const CMatrix h_eff = p_tr.cwiseSqrt().asDiagonal() * (h_eq * f_rf);
    const double km = double(k * cfg.streams_per_rf);
    const BasebandPrecoder bb = mmse_baseband(h_eff, noise_covariance(k, cfg.sigma_n2), km);

    PrecoderSet p{f_rf, bb.f_bb, p_tr, bb.beta};
    normalize_hybrid(p, km);
    return p;
}

double user_offset(const SimConfig &cfg, std::size_t k)
{
    if (cfg.k_users < 2)
        return 0.0;
    return -0.5 * cfg.user_spread + cfg.user_spread * double(k) / double(cfg.k_users - 1);
}

} // namespace

double SimConfig::p_max_linear() const
{
    if (snr_db)
        return sigma_n2 * from_db(*snr_db);
    return from_db(p_max_db);
}

void SimConfig::validate() const
{
    auto fail = [](const std::string &msg) { throw Error(ErrorKind::ValidationError, msg); };
    if (n_tx < 1 || n_rf < 1 || n_rx < 1 || k_users < 1 || n_paths < 1)
        fail("antenna, chain, user and path counts must be at least 1");
    if (n_rf > n_tx)
        fail("n_rf must not exceed n_tx (N_RF <= N_T)");
    if (k_users > n_rf)
        fail("k_users must not exceed n_rf (K <= N_RF)");
    if (streams_per_rf < 1)
        fail("streams_per_rf must be at least 1");
    if (n_trials < 1)
        fail("n_trials must be at least 1");
    if (!(spacing_wavelengths > 0.0))
        fail("spacing_wavelengths must be positive");
    if (!(sigma_n2 > 0.0) || !std::isfinite(sigma_n2))
        fail("sigma_n2 must be positive");
    if (!(p_max_linear() > 0.0) || !std::isfinite(p_max_linear()))
        fail("p_max must be positive after dB conversion");
    if (!std::isfinite(inr_db))
        fail("inr_db must be finite");
    if (!(distance_m > 0.0))
        fail("distance_m must be positive");
    if (!(path_loss_exponent >= 0.0))
        fail("path_loss_exponent must be non-negative");
    if (ber_symbols < 1)
        fail("ber_symbols must be at least 1");
    if (!(solver.step0 > 0.0) || !(solver.shrink > 0.0 && solver.shrink < 1.0) || !(solver.tol > 0.0) ||
        solver.max_iter < 1)
        fail("solver options must satisfy step0 > 0, 0 < shrink < 1, tol > 0, max_iter >= 1");
    try
    {
        model.validate();
    }
    catch (const Error &e)
    {
        fail(std::string("model: ") + e.what());
    }
}

std::string_view to_string(SweepFamily f)
{
    switch (f)
    {
    case SweepFamily::Spacing: return "spacing";
    case SweepFamily::InterferenceVsDistance: return "interference_vs_distance";
    case SweepFamily::SnrSumRate: return "snr_sumrate";
    case SweepFamily::MismatchSinr: return "mismatch_sinr";
    case SweepFamily::MismatchBer: return "mismatch_ber";
    case SweepFamily::EstErrorCdf: return "est_error_cdf";
    }
    return "unknown";
}

std::optional<SweepFamily> sweep_family_from_string(std::string_view s)
{
    for (auto f : {SweepFamily::Spacing, SweepFamily::InterferenceVsDistance, SweepFamily::SnrSumRate,
                   SweepFamily::MismatchSinr, SweepFamily::MismatchBer, SweepFamily::EstErrorCdf})
        if (to_string(f) == s)
            return f;
    return std::nullopt;
}

std::string_view default_variable(SweepFamily f)
{
    switch (f)
    {
    case SweepFamily::Spacing: return "spacing_wavelengths";
    case SweepFamily::InterferenceVsDistance: return "distance_m";
    case SweepFamily::SnrSumRate: return "snr_db";
    case SweepFamily::MismatchSinr:
    case SweepFamily::MismatchBer:
    case SweepFamily::EstErrorCdf: return "mismatch_theta_deg";
    }
    return "";
}

void SweepSpec::validate() const
{
    if (values.empty())
        throw Error(ErrorKind::ValidationError, "sweep '" + name + "': values must be non-empty");
    if (family != SweepFamily::EstErrorCdf && values.size() > 1)
    {
        const bool up = std::adjacent_find(values.begin(), values.end(), std::greater_equal<>()) == values.end();
        const bool down = std::adjacent_find(values.begin(), values.end(), std::less_equal<>()) == values.end();
        if (!up && !down)
            throw Error(ErrorKind::ValidationError, "sweep '" + name + "': values must be strictly monotone");
    }
    SimConfig probe;
    if (!set_config_value(probe, variable, values.front()))
        throw Error(ErrorKind::ValidationError, "sweep '" + name + "': unknown variable '" + variable + "'");
    for (const auto &[k, v] : fixed)
        if (!set_config_value(probe, k, v))
            throw Error(ErrorKind::ValidationError, "sweep '" + name + "': unknown override '" + k + "'");
}

bool set_config_value(SimConfig &cfg, std::string_view key, double value)
{
    auto count = [&](std::size_t &field) {
        if (!(value >= 0.0) || value != std::floor(value))
            throw Error(ErrorKind::ValidationError, std::string(key) + " must be a non-negative integer");
        field = static_cast<std::size_t>(value);
        return true;
    };
    if (key == "n_tx") return count(cfg.n_tx);
    if (key == "n_rf") return count(cfg.n_rf);
    if (key == "n_rx") return count(cfg.n_rx);
    if (key == "k_users") return count(cfg.k_users);
    if (key == "n_paths") return count(cfg.n_paths);
    if (key == "streams_per_rf") return count(cfg.streams_per_rf);
    if (key == "n_trials") return count(cfg.n_trials);
    if (key == "ber_symbols") return count(cfg.ber_symbols);
    if (key == "spacing_wavelengths") { cfg.spacing_wavelengths = value; return true; }
    if (key == "p_max_db") { cfg.p_max_db = value; cfg.snr_db.reset(); return true; }
    if (key == "sigma_n2") { cfg.sigma_n2 = value; return true; }
    if (key == "snr_db") { cfg.snr_db = value; return true; }
    if (key == "inr_db") { cfg.inr_db = value; return true; }
    if (key == "mismatch_theta_deg") { cfg.mismatch_theta = value * kDeg; return true; }
    if (key == "distance_m") { cfg.distance_m = value; return true; }
    if (key == "path_loss_exponent") { cfg.path_loss_exponent = value; return true; }
    if (key == "user_spread_deg") { cfg.user_spread = value * kDeg; return true; }
    if (key == "carrier_ghz") { cfg.carrier_ghz = value; return true; }
    if (key == "bandwidth_mhz") { cfg.bandwidth_mhz = value; return true; }
    if (key == "model.mu_theta_deg") { cfg.model.mu_theta = value * kDeg; return true; }
    if (key == "model.mu_phi_deg") { cfg.model.mu_phi = value * kDeg; return true; }
    if (key == "model.sigma_theta_deg") { cfg.model.sigma_theta = value * kDeg; return true; }
    if (key == "model.sigma_phi_deg") { cfg.model.sigma_phi = value * kDeg; return true; }
    if (key == "model.rho") { cfg.model.rho = value; return true; }
    if (key == "solver.step0") { cfg.solver.step0 = value; return true; }
    if (key == "solver.shrink") { cfg.solver.shrink = value; return true; }
    if (key == "solver.tol") { cfg.solver.tol = value; return true; }
    if (key == "solver.max_iter")
    {
        std::size_t it = 0;
        count(it);
        cfg.solver.max_iter = int(it);
        return true;
    }
    if (key == "entropy.trigger_tau")
    {
        cfg.entropy_trigger = {EntropyTrigger::Mode::Fixed, value};
        return true;
    }
    return false;
}

MetricRecord run_trial(const SimConfig &cfg, std::size_t trial_index, TrialArtifacts *artifacts)
{
    MetricRecord rec;
    rec.trial_id = trial_index;
    try
    {
        cfg.validate();
        const std::size_t k_users = cfg.k_users;
        const double p_max = cfg.p_max_linear();
        const double amp = path_loss_amplitude(cfg.distance_m, cfg.path_loss_exponent);

        // Channels.
        Rng path_rng = child_rng(cfg.seed, trial_index, kPathStream);
        std::vector<ChannelRealization> users;
        std::vector<AnglePhaseSample> pooled;
        users.reserve(k_users);
        for (std::size_t k = 0; k < k_users; ++k)
        {
            PathDraw d = draw_paths(cfg.model, cfg.n_paths, path_rng, user_offset(cfg, k), amp);
            pooled.insert(pooled.end(), d.raw.begin(), d.raw.end());
            users.push_back(synthesize_channel(d.paths, cfg.n_rx, cfg.n_tx, cfg.spacing_wavelengths,
                                               cfg.mismatch_theta));
        }
        std::vector<CMatrix> h_true, h_est;
        for (const auto &u : users)
        {
            h_true.push_back(u.h_true);
            h_est.push_back(u.h_est);
        }
        const CMatrix h_true_stacked = stack_channels(h_true);
        const CMatrix h_est_stacked = stack_channels(h_est);

        // Angle/phase statistics and the re-estimation trigger.
        bool reestimated = false;
        if (pooled.size() >= 2)
        {
            MleFit fit = fit_mle(pooled);
            rec.entropy = entropy_report(fit.model);
            std::optional<double> tau;
            if (cfg.entropy_trigger.mode == EntropyTrigger::Mode::Auto)
                tau = default_entropy_threshold(cfg.model);
            else if (cfg.entropy_trigger.mode == EntropyTrigger::Mode::Fixed)
                tau = cfg.entropy_trigger.tau;
            if (should_reestimate(rec.entropy, tau))
            {
                Rng pilot_rng = child_rng(cfg.seed, trial_index, kPilotStream);
                const auto pilots = sample_angle_phase(cfg.model, pooled.size(), pilot_rng);
                fit = fit_mle(pilots);
                rec.entropy = entropy_report(fit.model);
                reestimated = true;
            }
        }

        // Analog precoder from the spatial covariance of the estimated rows.
        std::vector<CVector> rows;
        rows.reserve(std::size_t(h_est_stacked.rows()));
        for (Eigen::Index r = 0; r < h_est_stacked.rows(); ++r)
            rows.push_back(h_est_stacked.row(r).adjoint());
        const RfPrecoder rf = rf_precoder(channel_stats(rows), cfg.n_rf);

        // Initial combiners, digital precoder, combiner refinement, final digital precoder.
        const CombinerSet w0 = combiners_from_closed_form(closed_form_combiner(rf.f_rf, h_est_stacked), h_est);
        const RVector p_tr = allocate_power(k_users, p_max);
        const PrecoderSet first = build_precoder(rf.f_rf, w0, h_est, p_tr, cfg);

        const SumRateProblem problem(first, h_est, cfg.sigma_n2, p_max);
        const GradientState sol = maximize_sum_rate(problem.project(w0), problem, cfg.solver);
        const CombinerSet w = unit_norm(sol.iterate);
        const PrecoderSet prec = build_precoder(rf.f_rf, w, h_est, p_tr, cfg);
        const CMatrix f = prec.hybrid();

        // Evaluation on the true channels.
        const double p_int = cfg.sigma_n2 * from_db(cfg.inr_db);
        std::vector<double> int_powers(cfg.interferer_angles.size(), p_int);
        std::vector<std::vector<CVector>> int_channels(k_users);
        for (std::size_t k = 0; k < k_users; ++k)
            for (double ang : cfg.interferer_angles)
                int_channels[k].push_back(amp * array_response(ang, cfg.model.mu_phi, cfg.n_rx, cfg.spacing_wavelengths));

        Rng ber_rng = child_rng(cfg.seed, trial_index, kBerStream);
        rec.per_user_sinr_db.resize(k_users);
        double ber_sum = 0.0;
        for (std::size_t k = 0; k < k_users; ++k)
        {
            const CVector &wk = w.w_blocks[k];
            const Eigen::RowVectorXcd g = wk.adjoint() * h_true[k] * f; // 1 x K
            double sig = 0.0, inter = 0.0;
            for (std::size_t m = 0; m < k_users; ++m)
            {
                const double pw = prec.p_tr(Eigen::Index(m)) * std::norm(g(Eigen::Index(m)));
                (m == k ? sig : inter) += pw;
            }
            for (std::size_t l = 0; l < int_powers.size(); ++l)
                inter += int_powers[l] * std::norm(wk.dot(int_channels[k][l]));
            const double noise = cfg.sigma_n2 * wk.squaredNorm();
            const double sinr = sig / (inter + noise);
            rec.sum_rate += per_user_rate(sig, inter, noise);
            rec.per_user_sinr_db[k] = to_db(sinr);
            ber_sum += qpsk_ber(sinr, cfg.ber_symbols, ber_rng);
        }
        rec.worst_case_sinr_db = *std::min_element(rec.per_user_sinr_db.begin(), rec.per_user_sinr_db.end());
        rec.interference_db = interference_power_db(w.w_blocks, int_channels, int_powers);
        rec.ber = ber_sum / double(k_users);
        rec.est_error = estimation_error(h_true_stacked, h_est_stacked);
        rec.converged = sol.converged;
        rec.iterations = sol.iteration;

        if (artifacts)
        {
            artifacts->f_rf = prec.f_rf;
            artifacts->f_bb = prec.f_bb;
            artifacts->combiner = w;
            artifacts->solver_trace = sol.trace;
            artifacts->rank_deficient = rf.rank_deficient;
            artifacts->reestimated = reestimated;
        }
    }
    catch (const Error &e)
    {
        rec.failed = true;
        rec.failure = std::string(to_string(e.kind()));
    }
    return rec;
}

Summary summarize(std::vector<double> values)
{
    Summary s;
    if (values.empty())
        return s;
    std::sort(values.begin(), values.end());
    double acc = 0.0;
    for (double v : values)
        acc += v;
    s.mean = acc / double(values.size());
    // Linear interpolation between order statistics.
    auto quantile = [&](double q) {
        const double pos = q * double(values.size() - 1);
        const std::size_t lo = std::size_t(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (pos - double(lo)) * (values[hi] - values[lo]);
    };
    s.median = quantile(0.5);
    s.p5 = quantile(0.05);
    s.p95 = quantile(0.95);
    return s;
}

namespace
{

std::vector<MetricRecord> run_indexed(const SimConfig &cfg, std::size_t n, unsigned workers)
{
    std::vector<MetricRecord> out(n);
    workers = std::max(1u, std::min<unsigned>(workers, unsigned(std::max<std::size_t>(n, 1))));
    if (workers == 1)
    {
        for (std::size_t t = 0; t < n; ++t)
            out[t] = run_trial(cfg, t);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < n; t = next++)
                out[t] = run_trial(cfg, t);
        });
    pool.clear();
    return out;
}

} // namespace

std::vector<MetricRecord> run_batch(const SimConfig &cfg, unsigned workers)
{
    cfg.validate();
    return run_indexed(cfg, cfg.n_trials, workers);
}

SweepResult run_sweep(const SweepSpec &spec, const SimConfig &cfg, unsigned workers)
{
    spec.validate();
    SimConfig base = cfg;
    for (const auto &[k, v] : spec.fixed)
        set_config_value(base, k, v);

    SweepResult res;
    res.variable = spec.variable;
    for (std::size_t i = 0; i < spec.values.size(); ++i)
    {
        SimConfig c = base;
        set_config_value(c, spec.variable, spec.values[i]);
        c.validate();
        std::vector<MetricRecord> recs = run_indexed(c, c.n_trials, workers);

        SweepPoint pt;
        pt.value = spec.values[i];
        std::vector<double> rate, sinr, intf, ber, err;
        for (auto &r : recs)
        {
            r.trial_id = i * c.n_trials + r.trial_id;
            r.sweep_var = spec.variable;
            r.sweep_value = spec.values[i];
            if (r.failed)
            {
                ++pt.n_failed;
                continue;
            }
            ++pt.n_ok;
            rate.push_back(r.sum_rate);
            sinr.push_back(r.worst_case_sinr_db);
            intf.push_back(r.interference_db);
            ber.push_back(r.ber);
            err.push_back(r.est_error);
        }
        pt.sum_rate = summarize(rate);
        pt.worst_sinr_db = summarize(sinr);
        pt.interference_db = summarize(intf);
        pt.ber = summarize(ber);
        pt.est_error = summarize(err);
        if (spec.family == SweepFamily::EstErrorCdf)
        {
            pt.est_error_sorted = err;
            std::sort(pt.est_error_sorted.begin(), pt.est_error_sorted.end());
        }
        res.points.push_back(std::move(pt));
        std::move(recs.begin(), recs.end(), std::back_inserter(res.records));
    }
    return res;
}

std::optional<double> loglog_slope(const std::vector<ComplexityRow> &rows)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto &r : rows)
        if (r.n_tx > 0 && r.seconds_per_trial > 0.0)
            pts.emplace_back(std::log(double(r.n_tx)), std::log(r.seconds_per_trial));
    if (pts.size() < 2)
        return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts)
    {
        mx += x;
        my += y;
    }
    mx /= double(pts.size());
    my /= double(pts.size());
    double sxx = 0.0, sxy = 0.0;
    for (auto [x, y] : pts)
    {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (!(sxx > 0.0))
        return std::nullopt;
    return sxy / sxx;
}

ComplexityReport complexity_probe(const SimConfig &cfg, const std::vector<std::size_t> &n_tx_values,
                                  std::size_t trials_per_point)
{
    ComplexityReport rep;
    for (std::size_t n_tx : n_tx_values)
    {
        SimConfig c = cfg;
        c.n_tx = n_tx;
        c.n_rf = std::min(c.n_rf, n_tx);
        c.k_users = std::min(c.k_users, c.n_rf);
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t t = 0; t < std::max<std::size_t>(trials_per_point, 1); ++t)
            run_trial(c, t);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        rep.rows.push_back({n_tx, dt.count() / double(std::max<std::size_t>(trials_per_point, 1))});
    }
    rep.slope = loglog_slope(rep.rows);
    return rep;
}

} // namespace hmimo
