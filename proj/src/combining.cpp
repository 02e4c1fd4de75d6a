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

#include "hmimo/combining.hpp"
#include "hmimo/error.hpp"
#include "hmimo/metrics.hpp"

#include <cmath>
#include <numbers>

namespace hmimo
{

CMatrix CombinerSet::w_rf() const
{
    Eigen::Index rows = 0;
    for (const auto &w : w_blocks)
        rows += w.size();
    CMatrix out = CMatrix::Zero(rows, Eigen::Index(w_blocks.size()));
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < w_blocks.size(); ++k)
    {
        out.block(r, Eigen::Index(k), w_blocks[k].size(), 1) = w_blocks[k];
        r += w_blocks[k].size();
    }
    return out;
}

CMatrix stack_channels(std::span<const CMatrix> per_user)
{
    if (per_user.empty())
        throw Error(ErrorKind::DimensionMismatch, "no user channels");
    Eigen::Index rows = 0;
    const Eigen::Index cols = per_user.front().cols();
    for (const auto &h : per_user)
    {
        if (h.cols() != cols)
            throw Error(ErrorKind::DimensionMismatch, "user channels differ in transmit dimension");
        rows += h.rows();
    }
    CMatrix out(rows, cols);
    Eigen::Index r = 0;
    for (const auto &h : per_user)
    {
        out.middleRows(r, h.rows()) = h;
        r += h.rows();
    }
    return out;
}

CMatrix equivalent_channel(const CombinerSet &combiner, std::span<const CMatrix> h_est_per_user)
{
    if (combiner.users() != h_est_per_user.size() || h_est_per_user.empty())
        throw Error(ErrorKind::DimensionMismatch, "one combiner block per user is required");
    // Equivalent to w_rf()^H * stack_channels(h) without forming the zeros.
    const Eigen::Index n_tx = h_est_per_user.front().cols();
    CMatrix out(Eigen::Index(combiner.users()), n_tx);
    for (std::size_t k = 0; k < combiner.users(); ++k)
    {
        const CMatrix &h = h_est_per_user[k];
        if (h.rows() != combiner.w_blocks[k].size() || h.cols() != n_tx)
            throw Error(ErrorKind::DimensionMismatch, "combiner block does not match user channel");
        out.row(Eigen::Index(k)) = combiner.w_blocks[k].adjoint() * h;
    }
    return out;
}

CMatrix closed_form_combiner(const CMatrix &f_rf, const CMatrix &h_est_stacked)
{
    if (f_rf.rows() != h_est_stacked.cols())
        throw Error(ErrorKind::DimensionMismatch, "f_rf rows must equal the transmit dimension");
    const CMatrix hf = h_est_stacked * f_rf;
    const CMatrix inner = hf.adjoint() * hf + CMatrix::Identity(f_rf.cols(), f_rf.cols());
    // F * (inner^-1 F^H)
    const CMatrix w = f_rf * solve_hpd(inner, f_rf.adjoint());
    return symmetrize(w);
}

CombinerSet combiners_from_closed_form(const CMatrix &w_closed, std::span<const CMatrix> h_est_per_user)
{
    CombinerSet out;
    out.w_blocks.reserve(h_est_per_user.size());
    for (const auto &h : h_est_per_user)
    {
        if (h.cols() != w_closed.rows())
            throw Error(ErrorKind::DimensionMismatch, "closed-form matrix does not match user channel");
        const CMatrix block = h * w_closed * h.adjoint();
        const HermitianEvd evd = hermitian_evd(symmetrize(block));
        out.w_blocks.push_back(evd.eigvecs.col(0));
    }
    return out;
}

SumRateProblem::SumRateProblem(const PrecoderSet &precoder, std::span<const CMatrix> h_est_per_user,
                               double sigma_n2, double p_max)
    : sigma_n2_(sigma_n2), p_max_(p_max)
{
    if (!(sigma_n2 > 0.0))
        throw Error(ErrorKind::NonPositiveNoise, "noise variance must be positive");
    const CMatrix f = precoder.hybrid();
    const std::size_t k_users = h_est_per_user.size();
    if (Eigen::Index(k_users) != f.cols() || precoder.p_tr.size() != f.cols())
        throw Error(ErrorKind::DimensionMismatch, "precoder streams must match the user count");
    v_.reserve(k_users);
    q_.reserve(k_users);
    for (std::size_t k = 0; k < k_users; ++k)
    {
        const CMatrix &h = h_est_per_user[k];
        if (h.cols() != f.rows())
            throw Error(ErrorKind::DimensionMismatch, "user channel does not match precoder");
        v_.push_back(h * f.col(Eigen::Index(k)));
        q_.push_back(h * h.adjoint());
        p_.push_back(precoder.p_tr(Eigen::Index(k)));
    }
}

RateTerms SumRateProblem::terms(const CombinerSet &w) const
{
    if (w.users() != v_.size())
        throw Error(ErrorKind::DimensionMismatch, "combiner user count differs from problem");
    RateTerms t;
    t.signal.resize(v_.size());
    double total = 0.0;
    for (std::size_t k = 0; k < v_.size(); ++k)
    {
        if (w.w_blocks[k].size() != v_[k].size())
            throw Error(ErrorKind::DimensionMismatch, "combiner block length differs from receive antennas");
        t.signal[k] = p_[k] * std::norm(w.w_blocks[k].dot(v_[k]));
        total += t.signal[k];
    }
    t.interference.resize(v_.size());
    for (std::size_t k = 0; k < v_.size(); ++k)
    {
        double acc = 0.0;
        for (std::size_t m = 0; m < v_.size(); ++m)
            if (m != k)
                acc += t.signal[m];
        t.interference[k] = acc;
    }
    return t;
}

double SumRateProblem::objective(const CombinerSet &w) const
{
    const RateTerms t = terms(w);
    double r = 0.0;
    for (std::size_t k = 0; k < v_.size(); ++k)
        r += per_user_rate(t.signal[k], t.interference[k], sigma_n2_);
    return r;
}

std::vector<CVector> SumRateProblem::gradient(const CombinerSet &w) const
{
    const RateTerms t = terms(w);
    const std::size_t n = v_.size();
    double total = 0.0;
    for (double s : t.signal)
        total += s;

    // r = sum_k [log2(T + s2) - log2(T - S_k + s2)], T = sum S.
    // dr/dS_j = (K / (T + s2) - sum_{k != j} 1 / (T - S_k + s2)) / ln 2
    std::vector<double> inv_den(n);
    double sum_inv = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        inv_den[k] = 1.0 / (t.interference[k] + sigma_n2_);
        sum_inv += inv_den[k];
    }
    const double head = double(n) / (total + sigma_n2_);

    std::vector<CVector> g(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        const double dr_ds = (head - (sum_inv - inv_den[j])) / std::numbers::ln2;
        // S_j = p |c|^2 with c = w^H v; 2 dS/d conj(w) = 2 p v conj(c)
        const cplx c = w.w_blocks[j].dot(v_[j]);
        g[j] = (2.0 * p_[j] * dr_ds) * v_[j] * std::conj(c);
    }
    return g;
}

double SumRateProblem::constraint_trace(const CombinerSet &w) const
{
    double tr = 0.0;
    for (std::size_t k = 0; k < q_.size(); ++k)
        tr += std::real(w.w_blocks[k].dot(q_[k] * w.w_blocks[k]));
    return tr;
}

bool SumRateProblem::feasible(const CombinerSet &w, double slack) const
{
    return constraint_trace(w) <= p_max_ + slack * std::max(1.0, p_max_);
}

CombinerSet SumRateProblem::project(const CombinerSet &w) const
{
    const double tr = constraint_trace(w);
    if (tr <= p_max_)
        return w;
    CombinerSet out = w;
    const double c = std::sqrt(p_max_ / tr);
    for (auto &b : out.w_blocks)
        b *= c;
    return out;
}

double SumRateProblem::stationarity_residual(const CombinerSet &w) const
{
    const std::vector<CVector> g = gradient(w);
    const double tr = constraint_trace(w);
    double gg = 0.0;
    for (const auto &b : g)
        gg += b.squaredNorm();
    if (tr < p_max_ * (1.0 - 1e-9))
        return std::sqrt(gg);

    // Outward normal of the trace constraint: 2 Q_k w_k per block.
    double gn = 0.0, nn = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
    {
        const CVector nk = 2.0 * (q_[k] * w.w_blocks[k]);
        gn += std::real(nk.dot(g[k]));
        nn += nk.squaredNorm();
    }
    if (gn <= 0.0 || nn == 0.0)
        return std::sqrt(gg);
    return std::sqrt(std::max(gg - gn * gn / nn, 0.0));
}

std::vector<double> SumRateProblem::interference_weights(const CombinerSet &w) const
{
    const RateTerms t = terms(w);
    std::vector<double> a(t.interference.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        a[k] = 1.0 / (t.interference[k] + sigma_n2_);
    return a;
}

double sum_rate_objective(const CombinerSet &combiner, const PrecoderSet &precoder,
                          std::span<const CMatrix> h_est_per_user, double sigma_n2)
{
    return SumRateProblem(precoder, h_est_per_user, sigma_n2, 1.0).objective(combiner);
}

std::vector<CVector> sum_rate_gradient(const CombinerSet &combiner, const PrecoderSet &precoder,
                                       std::span<const CMatrix> h_est_per_user, double sigma_n2)
{
    return SumRateProblem(precoder, h_est_per_user, sigma_n2, 1.0).gradient(combiner);
}

namespace
{

double block_norm(const std::vector<CVector> &blocks)
{
    double s = 0.0;
    for (const auto &b : blocks)
        s += b.squaredNorm();
    return std::sqrt(s);
}

} // namespace

GradientState maximize_sum_rate(const CombinerSet &init, const SumRateProblem &problem, const SolverOptions &opts)
{
    if (!problem.feasible(init))
        throw Error(ErrorKind::InfeasibleInit, "initial combiner violates the trace constraint");

    constexpr double kMinStep = 1e-12;
    GradientState st;
    st.iterate = init;
    st.objective = problem.objective(init);
    st.step = opts.step0;

    for (int it = 1; it <= opts.max_iter; ++it)
    {
        st.iteration = it;
        const std::vector<CVector> g = problem.gradient(st.iterate);
        const double gnorm = block_norm(g);
        if (!(gnorm > 0.0))
        {
            st.converged = true;
            st.trace.push_back({it, st.objective, 0.0, true});
            break;
        }
        // Steps are measured relative to the current iterate's size.
        const double wnorm = block_norm(st.iterate.w_blocks);
        const double scale = (wnorm > 0.0 ? wnorm : 1.0) / gnorm;

        bool accepted = false;
        CombinerSet cand;
        double f_cand = st.objective;
        for (double s = opts.step0; s >= kMinStep; s *= opts.shrink)
        {
            cand = st.iterate;
            for (std::size_t k = 0; k < g.size(); ++k)
                cand.w_blocks[k] += (s * scale) * g[k];
            cand = problem.project(cand);
            f_cand = problem.objective(cand);
            if (f_cand > st.objective)
            {
                accepted = true;
                st.step = s;
                break;
            }
        }
        if (!accepted)
        {
            st.converged = true;
            st.trace.push_back({it, st.objective, 0.0, true});
            break;
        }

        const double gain = f_cand - st.objective;
        const double rel = gain / std::max(std::abs(st.objective), 1e-300);
        st.iterate = std::move(cand);
        st.objective = f_cand;
        st.trace.push_back({it, st.objective, st.step, problem.feasible(st.iterate)});
        if (rel < opts.tol)
        {
            st.converged = true;
            break;
        }
    }
    return st;
}

double weighted_log_utility(std::span<const double> alphas, std::span<const double> u)
{
    if (alphas.size() != u.size())
        throw Error(ErrorKind::DimensionMismatch, "weights and arguments differ in length");
    double v = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
        v += alphas[k] * std::log(u[k]);
    return v;
}

} // namespace hmimo
