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

// Acceptance runner: one PASS/FAIL line per criterion, exit status = number of failures.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <functional>
#include <sstream>
#include <string>

#include "hmimo/angle_phase.hpp"
#include "hmimo/entropy.hpp"
#include "hmimo/results.hpp"
#include "hmimo/simulator.hpp"
#include "support.hpp"

using namespace hmimo;
using namespace hmimo::testing;

namespace
{

struct Outcome
{
    bool pass;
    std::string detail;
};

int failures = 0;
std::vector<int> selected; // empty = all

void report(int id, const char *title, double limit_s, const std::function<Outcome()> &body)
{
    if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end())
        return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
        o = body();
    }
    catch (const std::exception &e)
    {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string detail = o.detail;
    if (limit_s > 0.0 && dt > limit_s)
    {
        o.pass = false;
        detail += "; runtime over limit";
    }
    if (!o.pass)
        ++failures;
    std::printf("[%s] %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, detail.c_str(), dt);
    std::fflush(stdout);
}

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Outcome entropy_suite()
{
    const double rhos[] = {0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 0.9, -0.9};
    const std::pair<double, double> sigmas[] = {{0.1, 0.1}, {1.0, 1.0}, {2.0, 2.0}, {0.1, 2.0}, {2.0, 1.0}};
    double max_closed = 0.0, max_chain = 0.0, max_corr_gap = 0.0;
    for (double rho : rhos)
        for (auto [st, sp] : sigmas)
        {
            const AnglePhaseModel m{0.3, 3.0, st, sp, rho};
            const double q = joint_entropy_quadrature(m);
            max_closed = std::max(max_closed, std::abs(q - joint_entropy_closed_form(m)));
            max_chain = std::max(max_chain, std::abs(q - (entropy_1d(st) + conditional_entropy(m))));
            const double corr = joint_entropy_correlation_form(entropy_1d(st), entropy_1d(sp), rho);
            max_corr_gap = std::max(max_corr_gap, std::abs(corr - q));
        }
    const bool ok = max_closed <= 1e-3 && max_chain <= 1e-3;
    return {ok, fmt("45 points, max |quad-closed| = %.2e, max |quad-chain| = %.2e nats; correlation form deviates "
                    "from quadrature by up to %.3f nats",
                    max_closed, max_chain, max_corr_gap)};
}

Outcome sampler_moments()
{
    Rng rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    constexpr std::size_t n = 1000000;
    double worst_se = 0.0, worst_bin = 0.0;
    for (int model_i = 0; model_i < 10; ++model_i)
    {
        const AnglePhaseModel m{-1.0 + 2.0 * u(rng), 2.0 + 2.0 * u(rng), 0.05 + 0.5 * u(rng), 0.05 + 0.5 * u(rng),
                                -0.9 + 1.8 * u(rng)};
        const auto s = sample_angle_phase(m, n, rng);
        double mt = 0, mp = 0;
        for (const auto &x : s)
        {
            mt += x.theta;
            mp += x.phi;
        }
        mt /= n;
        mp /= n;
        double vt = 0, vp = 0, c = 0;
        for (const auto &x : s)
        {
            vt += (x.theta - mt) * (x.theta - mt);
            vp += (x.phi - mp) * (x.phi - mp);
            c += (x.theta - mt) * (x.phi - mp);
        }
        vt /= n - 1;
        vp /= n - 1;
        c /= n - 1;
        const double st2 = m.sigma_theta * m.sigma_theta, sp2 = m.sigma_phi * m.sigma_phi;
        const double cov = m.rho * m.sigma_theta * m.sigma_phi;
        const double z[] = {
            std::abs(mt - m.mu_theta) / std::sqrt(st2 / n),
            std::abs(mp - m.mu_phi) / std::sqrt(sp2 / n),
            std::abs(vt - st2) / (st2 * std::sqrt(2.0 / n)),
            std::abs(vp - sp2) / (sp2 * std::sqrt(2.0 / n)),
            std::abs(c - cov) / std::sqrt((st2 * sp2 + cov * cov) / n),
        };
        for (double zi : z)
            worst_se = std::max(worst_se, zi);

        // 20 bins over mu_theta +- 2 sigma_theta
        constexpr int bins = 20;
        const double lo = m.mu_theta - 2 * m.sigma_theta, w = 4 * m.sigma_theta / bins;
        std::vector<double> cnt(bins), s1(bins), s2(bins);
        for (const auto &x : s)
        {
            const int b = int(std::floor((x.theta - lo) / w));
            if (b < 0 || b >= bins)
                continue;
            cnt[b] += 1;
            s1[b] += x.phi;
            s2[b] += x.phi * x.phi;
        }
        for (int b = 0; b < bins; ++b)
        {
            const double mean = s1[b] / cnt[b];
            const double var = (s2[b] - cnt[b] * mean * mean) / (cnt[b] - 1);
            const ConditionalMoments cm = conditional_moments(m, lo + (b + 0.5) * w);
            worst_bin = std::max({worst_bin, std::abs(mean - cm.mean_phi) / std::abs(cm.mean_phi),
                                  std::abs(var - cm.var_phi) / cm.var_phi});
        }
    }
    return {worst_se <= 3.0 && worst_bin <= 0.05,
            fmt("10 models at n = 1e6: worst moment deviation %.2f standard errors; worst binned conditional "
                "moment error %.2f%%",
                worst_se, 100 * worst_bin)};
}

double max_abs(const std::vector<CVector> &g)
{
    double m = 0.0;
    for (const auto &b : g)
        m = std::max(m, b.cwiseAbs().maxCoeff());
    return m;
}

Outcome gradient_check()
{
    Rng rng(77);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i)
    {
        const SmallInstance s = small_instance(rng);
        const SumRateProblem p = s.problem();
        const CombinerSet w = s.random_combiner(rng);
        const auto g = p.gradient(w);
        const auto fd = finite_difference_gradient(p, w);
        const double scale = max_abs(g);
        for (std::size_t k = 0; k < g.size(); ++k)
            worst = std::max(worst, (g[k] - fd[k]).cwiseAbs().maxCoeff() / scale);
    }
    return {worst <= 1e-5, fmt("50 instances (K <= 3, N_RF <= 4): worst coordinate error %.2e relative", worst)};
}

Outcome solver_contracts()
{
    int non_monotone = 0, infeasible = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
    {
        Rng rng = child_rng(4242, seed);
        const SmallInstance s = small_instance(rng, 2, 2);
        SmallInstance t = s;
        // K = 2, N_RF = 2 as required by the audit.
        while (t.h.size() != 2 || t.precoder.f_rf.cols() != 2)
            t = small_instance(rng, 2, 2);
        const SumRateProblem p = t.problem();
        const GradientState st = maximize_sum_rate(p.project(t.random_combiner(rng)), p);
        double prev = -1.0;
        for (const auto &r : st.trace)
        {
            if (r.objective < prev)
                ++non_monotone;
            prev = r.objective;
        }
        if (p.constraint_trace(st.iterate) > p.p_max() + 1e-9)
            ++infeasible;
    }

    // Stationarity at the closed-form combiner against a random feasible point.
    // Scalar receivers are skipped: with one antenna every boundary point is
    // tangentially stationary and the ratio is undefined.
    Rng rng(99);
    std::vector<double> ratios;
    while (ratios.size() < 50)
    {
        const SmallInstance s = small_instance(rng);
        if (s.h.front().rows() < 2)
            continue;
        const SumRateProblem p = s.problem();
        const CMatrix w44 = closed_form_combiner(s.precoder.f_rf, stack_channels(s.h));
        const CombinerSet wc = p.project(combiners_from_closed_form(w44, s.h));
        const CombinerSet wr = p.project(s.random_combiner(rng));
        ratios.push_back(p.stationarity_residual(wc) / p.stationarity_residual(wr));
    }
    std::sort(ratios.begin(), ratios.end());
    const double worst_ratio = ratios.back();
    const bool ok = non_monotone == 0 && infeasible == 0 && worst_ratio <= 1e-4;
    return {ok, fmt("1000 runs: %.0f non-monotone, %.0f infeasible", non_monotone, infeasible) +
                    fmt("; closed-form/random stationarity ratio over 50 instances: min %.2e, median %.2e, max %.2e "
                        "(limit 1e-4)",
                        ratios.front(), ratios[ratios.size() / 2], worst_ratio)};
}

Outcome precoder_constraints()
{
    Rng rng(5);
    double c2 = 0.0, beta_err = 0.0, norm_err = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const std::size_t n_tx = uniform_int(4, 32, rng), n_rf = uniform_int(2, std::min<std::size_t>(n_tx, 8), rng);
        const std::size_t k = uniform_int(1, n_rf, rng);
        std::vector<CVector> est;
        for (int j = 0; j < 40; ++j)
            est.push_back(random_cvector(Eigen::Index(n_tx), rng));
        const RfPrecoder rf = rf_precoder(channel_stats(est), n_rf);
        c2 = std::max(c2, (rf.f_rf.cwiseAbs().array() - 1.0 / std::sqrt(double(n_tx))).abs().maxCoeff());
        const CMatrix h_eff = random_cmatrix(Eigen::Index(k), Eigen::Index(n_rf), rng);
        const double s = double(k);
        const BasebandPrecoder bb = mmse_baseband(h_eff, 0.1 * CMatrix::Identity(Eigen::Index(k), Eigen::Index(k)), s);
        beta_err = std::max(beta_err, std::abs(bb.f_bb.squaredNorm() - s) / s);
        PrecoderSet p{rf.f_rf, bb.f_bb, allocate_power(k, 1.0), bb.beta};
        normalize_hybrid(p, s);
        norm_err = std::max(norm_err, std::abs(p.hybrid().squaredNorm() - s) / s);
    }

    // First-order stationarity of the gain ratio at the MMSE point.
    int stationary = 0, total = 0;
    double worst_gain = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const std::size_t n_rf = uniform_int(1, 4, rng), k = uniform_int(1, std::min<std::size_t>(3, n_rf), rng);
        const CMatrix h = random_cmatrix(Eigen::Index(k), Eigen::Index(n_rf), rng);
        const double nv = 0.1;
        const BasebandPrecoder bb = mmse_baseband(h, nv * CMatrix::Identity(Eigen::Index(k), Eigen::Index(k)), 1.0);
        const double g0 = precoder_gain_ratio(bb.f_bb, h, nv);
        double gain = 0.0;
        for (int d = 0; d < 50; ++d)
        {
            CMatrix dir = random_cmatrix(bb.f_bb.rows(), bb.f_bb.cols(), rng);
            CMatrix f = bb.f_bb + 1e-3 * dir / dir.norm() * bb.f_bb.norm();
            f *= bb.f_bb.norm() / f.norm();
            gain = std::max(gain, (precoder_gain_ratio(f, h, nv) - g0) / g0);
        }
        ++total;
        stationary += gain <= 1e-6;
        worst_gain = std::max(worst_gain, gain);
    }
    const bool ok = c2 <= 1e-15 && beta_err <= 1e-9 && norm_err <= 1e-9 && stationary == total;
    return {ok, fmt("|F_RF| deviation %.1e, power trace error %.1e, hybrid norm error %.1e", c2, beta_err, norm_err) +
                    fmt("; MMSE stationary in %.0f/%.0f instances, worst relative gain %.2e", stationary, total,
                        worst_gain)};
}

SimConfig reference_config(std::size_t trials)
{
    SimConfig c;
    c.n_trials = trials;
    return c;
}

SweepResult sweep(SweepFamily fam, const std::string &var, std::vector<double> values,
                  std::vector<std::pair<std::string, double>> fixed, std::size_t trials)
{
    SweepSpec s;
    s.name = std::string(to_string(fam));
    s.family = fam;
    s.variable = var;
    s.values = std::move(values);
    s.fixed = std::move(fixed);
    return run_sweep(s, reference_config(trials), 1);
}

std::string means(const SweepResult &r, double Summary::*, const Summary SweepPoint::*metric)
{
    std::string out;
    for (const auto &p : r.points)
        out += (out.empty() ? "" : " ") + fmt("%.4g", (p.*metric).mean);
    return "[" + out + "]";
}

Outcome trends()
{
    constexpr std::size_t trials = 200;
    bool ok = true;
    std::string detail;

    const auto snr = sweep(SweepFamily::SnrSumRate, "snr_db", {0, 5, 10, 15, 20, 25, 30, 35}, {}, trials);
    bool a = true;
    for (std::size_t i = 1; i < snr.points.size(); ++i)
        a = a && snr.points[i].sum_rate.mean > snr.points[i - 1].sum_rate.mean;
    detail += std::string("a ") + (a ? "ok" : "FAIL") + " sum-rate " + means(snr, nullptr, &SweepPoint::sum_rate);
    ok = ok && a;

    bool b = true;
    for (double inr : {-10.0, -20.0})
    {
        const auto r = sweep(SweepFamily::MismatchSinr, "mismatch_theta_deg", {7, 13}, {{"inr_db", inr}}, trials);
        const bool bi = r.points[0].worst_sinr_db.mean > r.points[1].worst_sinr_db.mean;
        b = b && bi;
        detail += fmt("; b INR %.0f dB worst SINR", inr) + means(r, nullptr, &SweepPoint::worst_sinr_db);
    }
    detail += std::string(b ? " ok" : " FAIL");
    ok = ok && b;

    const auto ber = sweep(SweepFamily::MismatchBer, "mismatch_theta_deg", {5, 8, 12}, {}, trials);
    bool c = true;
    for (std::size_t i = 1; i < ber.points.size(); ++i)
        c = c && ber.points[i].ber.mean >= ber.points[i - 1].ber.mean;
    const auto beams = sweep(SweepFamily::MismatchBer, "n_rf", {8, 12, 16}, {{"mismatch_theta_deg", 8}}, trials);
    for (std::size_t i = 1; i < beams.points.size(); ++i)
        c = c && beams.points[i].ber.mean <= beams.points[i - 1].ber.mean;
    detail += "; c BER vs mismatch " + means(ber, nullptr, &SweepPoint::ber) + " vs beams " +
              means(beams, nullptr, &SweepPoint::ber) + (c ? " ok" : " FAIL");
    ok = ok && c;

    const auto cdf = sweep(SweepFamily::EstErrorCdf, "mismatch_theta_deg", {0, 12}, {}, trials);
    const auto &e0 = cdf.points[0].est_error_sorted, &e12 = cdf.points[1].est_error_sorted;
    bool d = e0.size() == e12.size() && !e0.empty();
    for (std::size_t i = 0; d && i < e0.size(); ++i)
        d = e0[i] <= e12[i];
    d = d && cdf.points[0].est_error.mean < cdf.points[1].est_error.mean;
    detail += fmt("; d mean est error %.3g vs %.3g", cdf.points[0].est_error.mean, cdf.points[1].est_error.mean) +
              (d ? " ok" : " FAIL");
    ok = ok && d;
    return {ok, detail};
}

std::uint64_t fnv(const std::string &s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s)
        h = (h ^ c) * 0x100000001b3ULL;
    return h;
}

Outcome determinism()
{
    SweepSpec s;
    s.name = "snr";
    s.family = SweepFamily::SnrSumRate;
    s.variable = "snr_db";
    s.values = {5, 20};
    auto csv = [&](unsigned workers) {
        std::ostringstream o;
        write_csv(run_sweep(s, reference_config(12), workers).records, o);
        return fnv(o.str());
    };
    const std::uint64_t h1 = csv(1), h2 = csv(1), h3 = csv(3);
    char buf[128];
    std::snprintf(buf, sizeof buf, "CSV hashes %016llx %016llx %016llx (1, 1, 3 workers)", (unsigned long long)h1,
                  (unsigned long long)h2, (unsigned long long)h3);
    return {h1 == h2 && h1 == h3, buf};
}

Outcome linalg_suite()
{
    Rng rng(8);
    double evd = 0.0, orth = 0.0, solve = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const Eigen::Index n = Eigen::Index(uniform_int(2, 16, rng));
        const CMatrix m = random_hermitian(n, rng);
        const HermitianEvd e = hermitian_evd(m);
        evd = std::max(evd, (e.eigvecs * e.eigvals.cast<cplx>().asDiagonal() * e.eigvecs.adjoint() - m).norm() / m.norm());
        orth = std::max(orth, (e.eigvecs.adjoint() * e.eigvecs - CMatrix::Identity(n, n)).norm());

        const CMatrix a0 = random_cmatrix(n, n, rng);
        const CMatrix a = a0 * a0.adjoint() + 0.1 * double(n) * CMatrix::Identity(n, n);
        const CMatrix b = random_cmatrix(n, Eigen::Index(uniform_int(1, 4, rng)), rng);
        solve = std::max(solve, (a * solve_hpd(a, b) - b).norm() / b.norm());
    }
    return {evd <= 1e-10 && orth <= 1e-10 && solve <= 1e-9,
            fmt("1000 instances: EVD reconstruction %.1e, orthonormality %.1e, solve residual %.1e", evd, orth, solve)};
}

} // namespace

// Optional arguments pick criterion numbers to run.
int main(int argc, char **argv)
{
    for (int i = 1; i < argc; ++i)
        selected.push_back(std::atoi(argv[i]));
    report(1, "entropy oracle suite", 10, entropy_suite);
    report(2, "sampler moments", 30, sampler_moments);
    report(3, "gradient correctness", 10, gradient_check);
    report(4, "solver contracts", 0, solver_contracts);
    report(5, "precoder constraints", 0, precoder_constraints);
    report(6, "trend reproduction", 300, trends);
    report(7, "determinism", 0, determinism);
    report(8, "linear-algebra suite", 0, linalg_suite);
    std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
