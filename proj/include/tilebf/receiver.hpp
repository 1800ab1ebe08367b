// SPDX-License-Identifier: Apache-2.0
//
// tilebf: link-level simulator for wideband tiled hybrid beamforming
// Copyright (C) 2026 The tilebf authors
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

#ifndef TILEBF_RECEIVER_HPP
#define TILEBF_RECEIVER_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "tilebf/beams.hpp"
#include "tilebf/model.hpp"

namespace tilebf {

/// Channel seen by the digital stage after per-tile analog combining: one
/// n_tiles x n_users matrix per subcarrier, entry (m, k) equal to
/// w_m^H h_mk(f) / ||w_m||.  Unit-norm combining keeps the per-stream noise
/// statistics unchanged.
struct EffectiveChannel {
    std::vector<Eigen::MatrixXcd> per_subcarrier;

    std::size_t n_subcarriers() const { return per_subcarrier.size(); }
    std::size_t n_tiles() const
    {
        return per_subcarrier.empty() ? 0 : static_cast<std::size_t>(per_subcarrier[0].rows());
    }
    std::size_t n_users() const
    {
        return per_subcarrier.empty() ? 0 : static_cast<std::size_t>(per_subcarrier[0].cols());
    }
};

/// Apply an RF weight plan to every channel vector in the tensor.
inline EffectiveChannel effective_channel(const RfWeightPlan& plan, const ChannelTensor& tensor)
{
    const std::size_t nd = tensor.n_tiles();
    const std::size_t na = tensor.n_per_tile();
    const std::size_t nu = tensor.n_users();
    if (plan.tile_weights.size() != nd)
        throw std::invalid_argument("effective_channel: plan has " +
                                    std::to_string(plan.tile_weights.size()) +
                                    " tiles, tensor has " + std::to_string(nd));

    std::vector<double> inv_norms(nd);
    for (std::size_t m = 0; m < nd; ++m) {
        if (plan.tile_weights[m].size() != na)
            throw std::invalid_argument("effective_channel: tile " + std::to_string(m) +
                                        " weight length mismatch");
        double norm_sq = 0.0;
        for (const cxd& w : plan.tile_weights[m])
            norm_sq += std::norm(w);
        if (!(norm_sq > 0.0))
            throw std::invalid_argument("effective_channel: tile " + std::to_string(m) +
                                        " has a zero weight vector");
        inv_norms[m] = 1.0 / std::sqrt(norm_sq);
    }

    EffectiveChannel eff;
    eff.per_subcarrier.reserve(tensor.n_subcarriers());
    for (std::size_t fi = 0; fi < tensor.n_subcarriers(); ++fi) {
        Eigen::MatrixXcd H(static_cast<Eigen::Index>(nd), static_cast<Eigen::Index>(nu));
        for (std::size_t m = 0; m < nd; ++m) {
            const std::vector<cxd>& w = plan.tile_weights[m];
            for (std::size_t k = 0; k < nu; ++k) {
                const std::span<const cxd> h = tensor.at(fi, m, k);
                cxd acc(0.0, 0.0);
                for (std::size_t i = 0; i < na; ++i)
                    acc += std::conj(w[i]) * h[i];
                H(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) =
                    acc * inv_norms[m];
            }
        }
        eff.per_subcarrier.push_back(std::move(H));
    }
    return eff;
}

namespace detail {

/// Guard against silent loss of Hermitian symmetry before a Cholesky solve.
inline void require_hermitian(const Eigen::MatrixXcd& m, const char* who)
{
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::runtime_error(std::string(who) + ": matrix is not Hermitian");
}

} // namespace detail

/// Per-subcarrier LMMSE SINR for one user (0-based): h_k^H R_k^{-1} h_k with
/// R_k the interference-plus-noise covariance of the other users' columns
/// plus 2 sigma^2 I.  Solved via Cholesky factorization, never an explicit
/// inverse; sigma2 is the noise variance per real dimension.
inline double lmmse_sinr(const Eigen::MatrixXcd& h_f, std::size_t user, double sigma2)
{
    const Eigen::Index nd = h_f.rows();
    const Eigen::Index nu = h_f.cols();
    if (user >= static_cast<std::size_t>(nu))
        throw std::out_of_range("lmmse_sinr: user index out of range");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("lmmse_sinr: sigma2 must be positive");

    Eigen::MatrixXcd r = 2.0 * sigma2 * Eigen::MatrixXcd::Identity(nd, nd);
    for (Eigen::Index j = 0; j < nu; ++j) {
        if (static_cast<std::size_t>(j) == user)
            continue;
        r.noalias() += h_f.col(j) * h_f.col(j).adjoint();
    }
    detail::require_hermitian(r, "lmmse_sinr");
    r = (r + r.adjoint().eval()) / 2.0;

    const Eigen::LLT<Eigen::MatrixXcd> llt(r);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("lmmse_sinr: covariance not positive definite");
    const Eigen::VectorXcd h_k = h_f.col(static_cast<Eigen::Index>(user));
    const double sinr = h_k.dot(llt.solve(h_k)).real();
    return std::max(0.0, sinr);
}

/// Band-averaged spectral efficiency of one user under per-subcarrier LMMSE:
/// midpoint average of log2(1 + SINR_k(f)) over the grid.
inline double wideband_rate(const EffectiveChannel& eff, std::size_t user, double sigma2)
{
    if (eff.per_subcarrier.empty())
        throw std::invalid_argument("wideband_rate: empty effective channel");
    double acc = 0.0;
    for (const Eigen::MatrixXcd& h_f : eff.per_subcarrier)
        acc += std::log2(1.0 + lmmse_sinr(h_f, user, sigma2));
    return acc / static_cast<double>(eff.per_subcarrier.size());
}

/// Sum rate of an unconstrained-complexity receiver: midpoint average of
/// log2 det(I + H^H(f) H(f) / (2 sigma^2)).  Upper-bounds the sum of
/// per-user LMMSE rates on the same channel.
inline double logdet_sum_rate_bound(const EffectiveChannel& eff, double sigma2)
{
    if (eff.per_subcarrier.empty())
        throw std::invalid_argument("logdet_sum_rate_bound: empty effective channel");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("logdet_sum_rate_bound: sigma2 must be positive");

    double acc = 0.0;
    for (const Eigen::MatrixXcd& h_f : eff.per_subcarrier) {
        const Eigen::Index nu = h_f.cols();
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(nu, nu);
        m.noalias() += h_f.adjoint() * h_f / (2.0 * sigma2);
        detail::require_hermitian(m, "logdet_sum_rate_bound");
        m = (m + m.adjoint().eval()) / 2.0;
        const Eigen::LLT<Eigen::MatrixXcd> llt(m);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("logdet_sum_rate_bound: factorization failed");
        double log_det = 0.0;
        const auto& l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < nu; ++i)
            log_det += 2.0 * std::log(l(i, i).real());
        acc += log_det / std::log(2.0);
    }
    return acc / static_cast<double>(eff.per_subcarrier.size());
}

/// SINR of the no-DSP benchmark: user k listens only to its assigned tile,
/// other users' power on that tile counts as noise.  tile_of_user maps each
/// user to a distinct 0-based tile.
inline double rf_only_sinr(const Eigen::MatrixXcd& h_f,
                           const std::vector<std::size_t>& tile_of_user, std::size_t user,
                           double sigma2)
{
    const std::size_t nd = static_cast<std::size_t>(h_f.rows());
    const std::size_t nu = static_cast<std::size_t>(h_f.cols());
    if (user >= nu)
        throw std::out_of_range("rf_only_sinr: user index out of range");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("rf_only_sinr: sigma2 must be positive");
    if (tile_of_user.size() != nu)
        throw std::invalid_argument("rf_only_sinr: assignment must cover every user");
    std::vector<bool> used(nd, false);
    for (std::size_t t : tile_of_user) {
        if (t >= nd)
            throw std::invalid_argument("rf_only_sinr: assigned tile out of range");
        if (used[t])
            throw std::invalid_argument("rf_only_sinr: assignment must be injective");
        used[t] = true;
    }

    const Eigen::Index m = static_cast<Eigen::Index>(tile_of_user[user]);
    double interference = 0.0;
    for (std::size_t j = 0; j < nu; ++j)
        if (j != user)
            interference += std::norm(h_f(m, static_cast<Eigen::Index>(j)));
    return std::norm(h_f(m, static_cast<Eigen::Index>(user))) / (interference + 2.0 * sigma2);
}

/// Band-averaged rate of the no-DSP benchmark for one user.
inline double rf_only_rate(const EffectiveChannel& eff,
                           const std::vector<std::size_t>& tile_of_user, std::size_t user,
                           double sigma2)
{
    if (eff.per_subcarrier.empty())
        throw std::invalid_argument("rf_only_rate: empty effective channel");
    double acc = 0.0;
    for (const Eigen::MatrixXcd& h_f : eff.per_subcarrier)
        acc += std::log2(1.0 + rf_only_sinr(h_f, tile_of_user, user, sigma2));
    return acc / static_cast<double>(eff.per_subcarrier.size());
}

/// Per-user rates, sum rate, the log-det benchmark, and the raw SINR traces
/// behind them.
struct RateReport {
    std::vector<double> per_user_rates;
    double sum_rate = 0.0;
    double logdet_bound = 0.0;
    std::vector<std::vector<double>> sinr_traces; // [user][subcarrier]
};

inline RateReport rate_report(const EffectiveChannel& eff, double sigma2)
{
    if (eff.per_subcarrier.empty())
        throw std::invalid_argument("rate_report: empty effective channel");
    const std::size_t nu = eff.n_users();
    const std::size_t nf = eff.n_subcarriers();

    RateReport report;
    report.per_user_rates.assign(nu, 0.0);
    report.sinr_traces.assign(nu, std::vector<double>(nf, 0.0));
    for (std::size_t k = 0; k < nu; ++k) {
        double acc = 0.0;
        for (std::size_t fi = 0; fi < nf; ++fi) {
            const double sinr = lmmse_sinr(eff.per_subcarrier[fi], k, sigma2);
            report.sinr_traces[k][fi] = sinr;
            acc += std::log2(1.0 + sinr);
        }
        report.per_user_rates[k] = acc / static_cast<double>(nf);
        report.sum_rate += report.per_user_rates[k];
    }
    report.logdet_bound = logdet_sum_rate_bound(eff, sigma2);
    return report;
}

} // namespace tilebf

#endif // TILEBF_RECEIVER_HPP
