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
#include <vector>

#include "hmimo/linalg.hpp"
#include "hmimo/precoding.hpp"

namespace hmimo
{

// Per-user receive combining vectors w_k (length n_rx of that user).
struct CombinerSet
{
    std::vector<CVector> w_blocks;

    std::size_t users() const { return w_blocks.size(); }

    // Block-diagonal (sum n_rx) x K matrix whose k-th column carries w_k.
    CMatrix w_rf() const;
};

// Stacks per-user channels (each n_rx x n_tx) row-wise.
CMatrix stack_channels(std::span<const CMatrix> per_user);

// W_RF^H * H_stacked: row k is w_k^H H_k.
CMatrix equivalent_channel(const CombinerSet &combiner, std::span<const CMatrix> h_est_per_user);

// F (F^H H^H H F + I)^-1 F^H for F = f_rf (n_tx x n_rf) and the stacked
// estimated channel H (rows = receive antennas). Result is n_tx x n_tx Hermitian.
CMatrix closed_form_combiner(const CMatrix &f_rf, const CMatrix &h_est_stacked);

// Per-user combiners read off the closed-form matrix: user k takes the
// dominant eigenvector of its own block H_k W H_k^H (unit norm).
CombinerSet combiners_from_closed_form(const CMatrix &w_closed, std::span<const CMatrix> h_est_per_user);

struct RateTerms
{
    std::vector<double> signal;       // p_k |w_k^H H_k f_k|^2
    std::vector<double> interference; // sum over the other users' signal terms
};

// Sum-rate problem over the combiners with the precoder held fixed. The
// per-user fraction uses user k's own received power as numerator and the
// other users' received powers as interference; rates are in bits/s/Hz.
class SumRateProblem
{
  public:
    SumRateProblem(const PrecoderSet &precoder, std::span<const CMatrix> h_est_per_user, double sigma_n2,
                   double p_max);

    std::size_t users() const { return v_.size(); }
    double sigma_n2() const { return sigma_n2_; }
    double p_max() const { return p_max_; }

    RateTerms terms(const CombinerSet &w) const;
    double objective(const CombinerSet &w) const;

    // Gradient with respect to (Re w, Im w) packed as complex numbers:
    // entry = d r / d Re w + j d r / d Im w.
    std::vector<CVector> gradient(const CombinerSet &w) const;

    // sum_k w_k^H H_k H_k^H w_k
    double constraint_trace(const CombinerSet &w) const;
    bool feasible(const CombinerSet &w, double slack = 1e-9) const;

    // Radial projection onto the trace constraint.
    CombinerSet project(const CombinerSet &w) const;

    // Gradient norm with the outward constraint-normal component removed
    // when the point sits on the constraint boundary.
    double stationarity_residual(const CombinerSet &w) const;

    // Per-user weights 1 / (interference_k + sigma_n2).
    std::vector<double> interference_weights(const CombinerSet &w) const;

  private:
    std::vector<CVector> v_; // H_k f_k
    std::vector<CMatrix> q_; // H_k H_k^H
    std::vector<double> p_;
    double sigma_n2_;
    double p_max_;
};

double sum_rate_objective(const CombinerSet &combiner, const PrecoderSet &precoder,
                          std::span<const CMatrix> h_est_per_user, double sigma_n2);

std::vector<CVector> sum_rate_gradient(const CombinerSet &combiner, const PrecoderSet &precoder,
                                       std::span<const CMatrix> h_est_per_user, double sigma_n2);

struct SolverOptions
{
    double step0 = 1.0;
    double shrink = 0.5;
    double tol = 1e-6;
    int max_iter = 200;
};

struct IterationRecord
{
    int iteration;
    double objective;
    double step;
    bool feasible;
};

struct GradientState
{
    CombinerSet iterate;
    double objective = 0.0;
    double step = 0.0;
    int iteration = 0;
    bool converged = false;
    std::vector<IterationRecord> trace;
};

// Projected gradient ascent with backtracking. A step is accepted only when
// the objective strictly increases; the search shrinks the step until that
// happens or the step underflows. Throws InfeasibleInit if `init` violates
// the trace constraint. Never throws on non-convergence.
GradientState maximize_sum_rate(const CombinerSet &init, const SumRateProblem &problem,
                                const SolverOptions &opts = {});

// sum_k alpha_k log(u_k); used to probe curvature along each u_k.
double weighted_log_utility(std::span<const double> alphas, std::span<const double> u);

} // namespace hmimo
