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

#include <catch_amalgamated.hpp>

#include "hmimo/angle_phase.hpp"
#include "hmimo/channel.hpp"
#include "hmimo/error.hpp"
#include "hmimo/quadrature.hpp"
#include "support.hpp"

using namespace hmimo;
using namespace hmimo::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("model validation", "[channel][errors]")
{
    CHECK_NOTHROW(AnglePhaseModel{0.0, 1.0, 0.1, 0.1, 0.99}.validate());
    CHECK_THROWS_AS((AnglePhaseModel{0.0, 1.0, 0.1, 0.1, 1.0}.validate()), Error);
    CHECK_THROWS_AS((AnglePhaseModel{0.0, 1.0, 0.1, 0.1, -1.0}.validate()), Error);
    CHECK_THROWS_AS((AnglePhaseModel{0.0, 1.0, 0.0, 0.1, 0.0}.validate()), Error);
    CHECK_THROWS_AS((AnglePhaseModel{0.0, 1.0, 0.1, -0.1, 0.0}.validate()), Error);
    Rng rng(1);
    try
    {
        sample_angle_phase({0.0, 0.0, 1.0, 1.0, 1.0}, 10, rng);
        FAIL("expected InvalidModel");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::InvalidModel);
    }
}

TEST_CASE("sampler is independent at rho = 0", "[channel][statistical]")
{
    Rng rng(11);
    const auto s = sample_angle_phase({0.0, 3.0, 1.0, 1.0, 0.0}, 1000000, rng);
    double mt = 0, mp = 0;
    for (auto &x : s)
    {
        mt += x.theta;
        mp += x.phi;
    }
    mt /= double(s.size());
    mp /= double(s.size());
    double c = 0, vt = 0, vp = 0;
    for (auto &x : s)
    {
        c += (x.theta - mt) * (x.phi - mp);
        vt += (x.theta - mt) * (x.theta - mt);
        vp += (x.phi - mp) * (x.phi - mp);
    }
    CHECK(std::abs(c / std::sqrt(vt * vp)) < 0.01);
}

TEST_CASE("sampler covariance for the (0, pi, 0.1, 0.1, 0.5) model", "[channel][statistical]")
{
    Rng rng(12);
    const std::size_t n = 1000000;
    const auto s = sample_angle_phase({0.0, kPi, 0.1, 0.1, 0.5}, n, rng);
    double mt = 0, mp = 0;
    for (auto &x : s)
    {
        mt += x.theta;
        mp += x.phi;
    }
    mt /= double(n);
    mp /= double(n);
    double vt = 0, vp = 0, c = 0;
    for (auto &x : s)
    {
        vt += (x.theta - mt) * (x.theta - mt);
        vp += (x.phi - mp) * (x.phi - mp);
        c += (x.theta - mt) * (x.phi - mp);
    }
    vt /= double(n - 1);
    vp /= double(n - 1);
    c /= double(n - 1);
    const double se_var = 0.01 * std::sqrt(2.0 / double(n));
    const double se_cov = std::sqrt((1e-4 + 0.005 * 0.005) / double(n));
    CHECK(std::abs(vt - 0.01) <= 3 * se_var);
    CHECK(std::abs(vp - 0.01) <= 3 * se_var);
    CHECK(std::abs(c - 0.005) <= 3 * se_cov);
}

TEST_CASE("conditional moments", "[channel]")
{
    const AnglePhaseModel m{0.0, 0.0, 1.0, 2.0, 0.5};
    const ConditionalMoments c = conditional_moments(m, 1.0);
    CHECK_THAT(c.mean_phi, WithinAbs(1.0, 1e-15));
    CHECK_THAT(c.var_phi, WithinAbs(3.0, 1e-15));

    const ConditionalMoments ind = conditional_moments({0.2, 1.5, 0.3, 0.4, 0.0}, 0.9);
    CHECK_THAT(ind.mean_phi, WithinAbs(1.5, 1e-15));
    CHECK_THAT(ind.var_phi, WithinAbs(0.16, 1e-15));

    for (double rho : {-0.8, 0.1, 0.7})
        CHECK_THAT(conditional_moments({0.4, 2.0, 0.3, 0.5, rho}, 0.4).mean_phi, WithinAbs(2.0, 1e-15));
}

TEST_CASE("fit_mle hand case and errors", "[channel]")
{
    const std::vector<AnglePhaseSample> s{{0.0, 1.0}, {2.0, 3.0}};
    const MleFit f = fit_mle(s);
    CHECK_THAT(f.model.mu_theta, WithinAbs(1.0, 1e-15));
    CHECK_THAT(f.model.mu_phi, WithinAbs(2.0, 1e-15));
    CHECK_THAT(f.model.sigma_theta * f.model.sigma_theta, WithinAbs(2.0, 1e-14));
    CHECK_THAT(f.model.sigma_phi * f.model.sigma_phi, WithinAbs(2.0, 1e-14));
    CHECK_THAT(f.sample_cov, WithinAbs(1.0, 1e-15));
    CHECK(f.model.rho < 1.0);

    const std::vector<AnglePhaseSample> same(5, AnglePhaseSample{0.3, 0.4});
    try
    {
        fit_mle(same);
        FAIL("expected DegenerateVariance");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::DegenerateVariance);
    }
    const std::vector<AnglePhaseSample> one{{0.1, 0.2}};
    CHECK_THROWS_AS(fit_mle(one), Error);
}

TEST_CASE("fit_mle recovers the generating model", "[channel][statistical]")
{
    Rng rng(13);
    const AnglePhaseModel m{0.3, 2.0, 0.2, 0.4, -0.6};
    const std::size_t n = 100000;
    const auto s = sample_angle_phase(m, n, rng);
    const MleFit f = fit_mle(s);
    const double rn = std::sqrt(double(n));
    CHECK(std::abs(f.model.mu_theta - m.mu_theta) <= 3 * m.sigma_theta / rn);
    CHECK(std::abs(f.model.mu_phi - m.mu_phi) <= 3 * m.sigma_phi / rn);
    CHECK(std::abs(f.model.sigma_theta - m.sigma_theta) <= 3 * m.sigma_theta / std::sqrt(2.0 * n));
    CHECK(std::abs(f.model.sigma_phi - m.sigma_phi) <= 3 * m.sigma_phi / std::sqrt(2.0 * n));
    CHECK(std::abs(f.model.rho - m.rho) <= 3 * (1 - m.rho * m.rho) / rn);
}

TEST_CASE("wrapping into the stated supports", "[channel]")
{
    for (double x : {-10.0, -3.2, -1.0, 0.0, 2.0, 3.15, 7.5})
    {
        const double a = wrap_angle(x);
        const double p = wrap_phase(x);
        CHECK(a >= -kPi);
        CHECK(a <= kPi);
        CHECK(p >= 0.0);
        CHECK(p <= 2 * kPi);
        CHECK_THAT(std::remainder(a - x, 2 * kPi), WithinAbs(0.0, 1e-12));
        CHECK_THAT(std::remainder(p - x, 2 * kPi), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("array response", "[channel]")
{
    const CVector b = array_response(0.0, 0.7, 8, 0.5);
    CHECK((b - CVector::Ones(8)).norm() == 0.0);

    const CVector e = array_response(kPi / 2, 0.0, 4, 0.5);
    CHECK_THAT(e(0).real(), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(e(0).imag(), WithinAbs(0.0, 1e-15));

    Rng rng(14);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 1000; ++i)
    {
        const CVector a = array_response(u(rng), u(rng) + kPi, 16, 0.5);
        REQUIRE((a.cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-15);
    }
    CHECK_THROWS_AS(array_response(0.1, 0.1, 0, 0.5), Error);
    CHECK_THROWS_AS(array_response(0.1, 0.1, 4, 0.0), Error);
}

TEST_CASE("channel synthesis", "[channel]")
{
    PathSet single;
    single.gains = {cplx(1.0, 0.0)};
    single.thetas = {0.0};
    single.phis = {1.0};
    const ChannelRealization r = synthesize_channel(single, 2, 5, 0.5, 0.0);
    CHECK((r.h_true - CMatrix::Ones(2, 5)).norm() <= 1e-15);

    Rng rng(15);
    const PathDraw d = draw_paths({0.1, 1.0, 0.1, 0.1, 0.3}, 6, rng);
    CHECK(d.paths.n_paths() == 6);
    CHECK(d.paths.n_reflected + d.paths.n_diffracted + d.paths.n_scattered == 5);
    const ChannelRealization z = synthesize_channel(d.paths, 2, 8, 0.5, 0.0);
    CHECK((z.h_est - z.h_true).norm() == 0.0);
    const ChannelRealization m = synthesize_channel(d.paths, 2, 8, 0.5, 0.1);
    CHECK((m.h_est - m.h_true).norm() > 0.0);
    CHECK((m.h_est - synthesize_matrix(d.paths, 2, 8, 0.5, 0.1)).norm() == 0.0);

    PathSet bad = d.paths;
    bad.n_scattered += 1;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = d.paths;
    bad.thetas.pop_back();
    CHECK_THROWS_AS(synthesize_matrix(bad, 2, 2, 0.5), Error);
}

TEST_CASE("multipath channel has unit entry variance", "[channel][statistical]")
{
    Rng rng(16);
    const AnglePhaseModel m{0.2, 1.0, 0.5, 0.5, 0.4};
    double acc = 0.0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i)
    {
        const PathDraw d = draw_paths(m, 64, rng);
        const CMatrix h = synthesize_matrix(d.paths, 2, 4, 0.5);
        acc += h.squaredNorm() / 8.0;
    }
    CHECK_THAT(acc / reps, WithinRel(1.0, 0.1));
}

TEST_CASE("rayleigh_iid moments and determinism", "[channel][statistical]")
{
    Rng rng(17);
    const CMatrix h = rayleigh_iid(1000, 1000, 2.0, rng);
    const double n = 1e6;
    const cplx mean = h.mean();
    CHECK_THAT(h.squaredNorm() / n, WithinRel(2.0, 0.01));
    CHECK(std::abs(mean.real()) <= 3 * std::sqrt(1.0 / n));
    CHECK(std::abs(mean.imag()) <= 3 * std::sqrt(1.0 / n));

    Rng a(5), b(5);
    CHECK(rayleigh_iid(3, 4, 1.0, a) == rayleigh_iid(3, 4, 1.0, b));
    CHECK_THROWS_AS(rayleigh_iid(2, 2, 0.0, a), Error);
}

TEST_CASE("path loss amplitude", "[channel]")
{
    CHECK(path_loss_amplitude(1.0, 0.4) == 1.0);
    CHECK_THAT(path_loss_amplitude(10.0, 0.4), WithinRel(std::pow(10.0, -0.2), 1e-15));
    CHECK_THROWS_AS(path_loss_amplitude(0.0, 0.4), Error);
}

TEST_CASE("density integrates to one and has the stated moments", "[channel][quadrature]")
{
    const AnglePhaseModel m{0.3, 2.0, 0.4, 0.7, 0.6};
    const GaussRule rule = gauss_legendre(16);
    const double ax = m.mu_theta - 8 * m.sigma_theta, bx = m.mu_theta + 8 * m.sigma_theta;
    const double ay = m.mu_phi - 8 * m.sigma_phi, by = m.mu_phi + 8 * m.sigma_phi;
    const auto f = [&](double t, double p) { return m.density(t, p); };
    CHECK_THAT(integrate_2d(f, ax, bx, ay, by, 32, rule), WithinAbs(1.0, 1e-6));
    const double cov = integrate_2d(
        [&](double t, double p) { return (t - m.mu_theta) * (p - m.mu_phi) * m.density(t, p); }, ax, bx, ay, by, 32,
        rule);
    CHECK_THAT(cov, WithinAbs(m.rho * m.sigma_theta * m.sigma_phi, 1e-6));

    // Marginal of theta against the univariate Gaussian.
    for (double t : {-0.5, 0.3, 0.9})
    {
        const double marg = integrate_1d([&](double p) { return m.density(t, p); }, ay, by, 64, rule);
        const double z = (t - m.mu_theta) / m.sigma_theta;
        const double gauss = std::exp(-0.5 * z * z) / (m.sigma_theta * std::sqrt(2 * kPi));
        CHECK_THAT(marg, WithinAbs(gauss, 1e-6));
    }
}
