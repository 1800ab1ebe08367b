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

#ifndef TILEBF_BEAMS_HPP
#define TILEBF_BEAMS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tilebf/model.hpp"

namespace tilebf {

/// Closed interval of spatial frequencies [center - width/2, center + width/2].
struct SpatialInterval {
    double center = 0.0;
    double width = 0.0;

    SpatialInterval(double center_in, double width_in) : center(center_in), width(width_in)
    {
        if (!(width >= 0.0))
            throw std::invalid_argument("SpatialInterval: width must be >= 0");
    }

    double lower() const { return center - width / 2.0; }
    double upper() const { return center + width / 2.0; }
};

/// Image of the band [f_c - B/2, f_c + B/2] under the spatial-frequency map
/// for a user at theta: centered on pi*sin(theta) with width |center| * beta.
/// This is the range a tile beam must cover to avoid squint loss.
inline SpatialInterval squint_interval(double theta_deg, double beta)
{
    if (!(std::abs(theta_deg) < 90.0))
        throw std::domain_error("squint_interval: |theta_deg| must be < 90, got " +
                                std::to_string(theta_deg));
    if (!(beta >= 0.0) || !(beta < 2.0))
        throw std::domain_error("squint_interval: beta must be in [0, 2), got " +
                                std::to_string(beta));
    const double center = kPi * std::sin(deg_to_rad(theta_deg));
    return SpatialInterval(center, std::abs(center) * beta);
}

/// One analog weight vector per tile.  phase_only marks plans realizable
/// with phase shifters alone (every entry unit modulus).
struct RfWeightPlan {
    std::vector<std::vector<cxd>> tile_weights;
    bool phase_only = true;
};

/// Spatial matched filter to the carrier-frequency response: the steering
/// vector at omega_c.
inline std::vector<cxd> narrowband_weights(std::size_t n_per_tile, double omega_c)
{
    return steering_vector(n_per_tile, omega_c);
}

/// Broad beam via a quadratic phase taper.  With the element index centered
/// as n = i - (n_elems/2 + 1) for 1-based i, the phase is
///     phi[n] = center * n + (width / (2 n_elems)) * n^2,
/// so the instantaneous spatial frequency d(phi)/dn sweeps the target
/// interval [center - width/2, center + width/2] across the aperture.
/// Requires an even element count; width 0 degenerates to the narrow beam
/// up to a constant phase.
inline std::vector<cxd> quadratic_broadbeam_weights(std::size_t n_elems,
                                                    const SpatialInterval& interval)
{
    if (n_elems == 0 || n_elems % 2 != 0)
        throw std::invalid_argument("quadratic_broadbeam_weights: n_elems must be even, got " +
                                    std::to_string(n_elems));
    const double n_d = static_cast<double>(n_elems);
    std::vector<cxd> w(n_elems);
    for (std::size_t i = 1; i <= n_elems; ++i) {
        const double n = static_cast<double>(i) - (n_d / 2.0 + 1.0);
        const double phi = interval.center * n + interval.width / (2.0 * n_d) * n * n;
        w[i - 1] = std::polar(1.0, phi);
    }
    return w;
}

namespace detail {

inline RfWeightPlan uniform_plan(const ArrayLayout& layout, std::vector<cxd> weights,
                                 bool phase_only)
{
    RfWeightPlan plan;
    plan.tile_weights.assign(layout.n_tiles(), std::move(weights));
    plan.phase_only = phase_only;
    return plan;
}

} // namespace detail

/// Every tile carries the same broad beam spanning the full interval.
inline RfWeightPlan single_broadbeam_plan(const ArrayLayout& layout,
                                          const SpatialInterval& interval)
{
    return detail::uniform_plan(layout, quadratic_broadbeam_weights(layout.n_per_tile(), interval),
                                true);
}

/// Tile m covers the m-th of n_tiles equal contiguous sub-intervals, ordered
/// from the lower edge.  Each tile gives up coverage elsewhere in exchange
/// for a narrower (higher-gain) beam over its own slice of the band.
inline RfWeightPlan partitioned_broadbeam_plan(const ArrayLayout& layout,
                                               const SpatialInterval& interval)
{
    const double nd = static_cast<double>(layout.n_tiles());
    const double sub_width = interval.width / nd;
    RfWeightPlan plan;
    plan.phase_only = true;
    plan.tile_weights.reserve(layout.n_tiles());
    for (std::size_t m = 0; m < layout.n_tiles(); ++m) {
        const double sub_center =
            interval.lower() + (static_cast<double>(m) + 0.5) * sub_width;
        plan.tile_weights.push_back(quadratic_broadbeam_weights(
            layout.n_per_tile(), SpatialInterval(sub_center, sub_width)));
    }
    return plan;
}

/// Cover the interval with matched narrow beams sized by the tile's 3 dB
/// beamwidth (0.886 * 2 pi / n_per_tile).  Beam centers are spread evenly
/// across the interval and dealt to tiles round-robin.  If there are more
/// beams than tiles, the surplus beams are merged onto tiles by complex
/// summation of their steering vectors, which needs amplitude control.
inline RfWeightPlan partitioned_narrowbeam_plan(const ArrayLayout& layout,
                                                const SpatialInterval& interval)
{
    const std::size_t na = layout.n_per_tile();
    const std::size_t nd = layout.n_tiles();
    const double omega_3db = 0.886 * 2.0 * kPi / static_cast<double>(na);
    const std::size_t n_beams = static_cast<std::size_t>(
        std::max(1.0, std::ceil(interval.width / omega_3db)));

    std::vector<double> centers(n_beams);
    const double beam_width = interval.width / static_cast<double>(n_beams);
    for (std::size_t b = 0; b < n_beams; ++b)
        centers[b] = interval.lower() + (static_cast<double>(b) + 0.5) * beam_width;

    RfWeightPlan plan;
    plan.phase_only = n_beams <= nd;
    plan.tile_weights.assign(nd, std::vector<cxd>(na, cxd(0.0, 0.0)));
    if (n_beams <= nd) {
        for (std::size_t m = 0; m < nd; ++m)
            plan.tile_weights[m] = narrowband_weights(na, centers[m % n_beams]);
    } else {
        // beam b lands on tile b mod n_tiles
        for (std::size_t b = 0; b < n_beams; ++b) {
            const std::vector<cxd> a = narrowband_weights(na, centers[b]);
            std::vector<cxd>& w = plan.tile_weights[b % nd];
            for (std::size_t i = 0; i < na; ++i)
                w[i] += a[i];
        }
    }
    return plan;
}

namespace detail {

/// Dominant eigenvector of a Hermitian PSD matrix by power iteration from a
/// fixed all-ones seed, so repeated eigenvalues and near-ties resolve
/// deterministically.  Stops when ||C v - lambda v|| <= 1e-12 * lambda or
/// after 10^4 iterations.
inline Eigen::VectorXcd dominant_eigenvector(const Eigen::MatrixXcd& cov)
{
    const Eigen::Index n = cov.rows();
    if (!(cov.norm() > 0.0))
        throw std::runtime_error("dominant_eigenvector: covariance is numerically zero");

    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n) / std::sqrt(static_cast<double>(n));
    std::size_t reseed = 0;
    for (int iter = 0; iter < 10000; ++iter) {
        Eigen::VectorXcd u = cov * v;
        const double lambda = v.dot(u).real();
        if ((u - lambda * v).norm() <= 1e-12 * std::max(lambda, 1e-300))
            break;
        const double nu = u.norm();
        if (!(nu > 0.0)) {
            // all-ones seed fell in the null space; restart from a basis vector
            if (reseed >= static_cast<std::size_t>(n))
                throw std::runtime_error("dominant_eigenvector: iteration collapsed");
            v = Eigen::VectorXcd::Unit(n, static_cast<Eigen::Index>(reseed++));
            continue;
        }
        v = u / nu;
    }
    return v;
}

} // namespace detail

/// Phase-only weights from the dominant eigenvector of the frequency-averaged
/// channel covariance (1/n_f) sum_f h(f) h(f)^H.  Each eigenvector entry is
/// normalized to unit magnitude; entries below 1e-12 in magnitude map to 1.
inline std::vector<cxd> dominant_mode_weights(
    const std::vector<std::vector<cxd>>& tile_channels_over_grid)
{
    if (tile_channels_over_grid.empty())
        throw std::invalid_argument("dominant_mode_weights: need at least one channel vector");
    const std::size_t n = tile_channels_over_grid.front().size();
    if (n == 0)
        throw std::invalid_argument("dominant_mode_weights: channel vectors must be nonempty");

    Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(n));
    for (const std::vector<cxd>& h : tile_channels_over_grid) {
        if (h.size() != n)
            throw std::invalid_argument("dominant_mode_weights: channel vectors differ in length");
        Eigen::Map<const Eigen::VectorXcd> hv(h.data(), static_cast<Eigen::Index>(n));
        cov.noalias() += hv * hv.adjoint();
    }
    cov /= static_cast<double>(tile_channels_over_grid.size());

    const Eigen::VectorXcd v = detail::dominant_eigenvector(cov);
    std::vector<cxd> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cxd z = v(static_cast<Eigen::Index>(i));
        w[i] = std::abs(z) < 1e-12 ? cxd(1.0, 0.0) : z / std::abs(z);
    }
    return w;
}

/// Per-tile dominant-mode plan for one user: each tile's weights come from
/// that tile's own channel snapshots across the whole grid.
inline RfWeightPlan dominant_mode_plan(const ChannelTensor& tensor, std::size_t user)
{
    if (user >= tensor.n_users())
        throw std::out_of_range("dominant_mode_plan: user index out of range");
    RfWeightPlan plan;
    plan.phase_only = true;
    plan.tile_weights.reserve(tensor.n_tiles());
    for (std::size_t m = 0; m < tensor.n_tiles(); ++m) {
        std::vector<std::vector<cxd>> snapshots;
        snapshots.reserve(tensor.n_subcarriers());
        for (std::size_t fi = 0; fi < tensor.n_subcarriers(); ++fi) {
            const std::span<const cxd> h = tensor.at(fi, m, user);
            snapshots.emplace_back(h.begin(), h.end());
        }
        plan.tile_weights.push_back(dominant_mode_weights(snapshots));
    }
    return plan;
}

/// |w^H a(omega)| / ||w|| for each omega: the amplitude gain a unit-norm
/// combiner realizes on a plane wave, peaking at sqrt(n) for a matched
/// narrow beam.
inline std::vector<double> beam_gain_pattern(const std::vector<cxd>& weights,
                                             const std::vector<double>& omegas)
{
    if (weights.empty())
        throw std::invalid_argument("beam_gain_pattern: weights must not be empty");
    double norm_sq = 0.0;
    for (const cxd& w : weights)
        norm_sq += std::norm(w);
    if (!(norm_sq > 0.0))
        throw std::invalid_argument("beam_gain_pattern: zero weight vector");
    const double inv_norm = 1.0 / std::sqrt(norm_sq);

    std::vector<double> gains(omegas.size());
    for (std::size_t s = 0; s < omegas.size(); ++s) {
        cxd acc(0.0, 0.0);
        for (std::size_t i = 0; i < weights.size(); ++i)
            acc += std::conj(weights[i]) * std::polar(1.0, static_cast<double>(i) * omegas[s]);
        gains[s] = std::abs(acc) * inv_norm;
    }
    return gains;
}

} // namespace tilebf

#endif // TILEBF_BEAMS_HPP
