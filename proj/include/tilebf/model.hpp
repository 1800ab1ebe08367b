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

#ifndef TILEBF_MODEL_HPP
#define TILEBF_MODEL_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tilebf {

using cxd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// Half-wavelength uniform linear array split into equal tiles.  Each tile
/// drives one RF chain, so the digital stage sees one complex stream per
/// tile and the total element count is n_per_tile * n_tiles.
class ArrayLayout {
  public:
    ArrayLayout(std::size_t n_per_tile, std::size_t n_tiles)
        : n_per_tile_(n_per_tile), n_tiles_(n_tiles)
    {
        if (n_per_tile == 0 || n_tiles == 0)
            throw std::invalid_argument("ArrayLayout: n_per_tile and n_tiles must be >= 1");
    }

    std::size_t n_per_tile() const { return n_per_tile_; }
    std::size_t n_tiles() const { return n_tiles_; }
    std::size_t n_total() const { return n_per_tile_ * n_tiles_; }

  private:
    std::size_t n_per_tile_;
    std::size_t n_tiles_;
};

/// Discretization of the signal band [f_c - B/2, f_c + B/2] into the
/// midpoints of n_subcarriers equal sub-bands.  All band averages in the
/// simulator are midpoint-rule sums over this grid.
class FrequencyGrid {
  public:
    FrequencyGrid(double carrier_hz, double bandwidth_hz, std::size_t n_subcarriers)
        : carrier_hz_(carrier_hz), bandwidth_hz_(bandwidth_hz)
    {
        if (!(carrier_hz > 0.0))
            throw std::invalid_argument("FrequencyGrid: carrier_hz must be positive");
        if (!(bandwidth_hz >= 0.0))
            throw std::invalid_argument("FrequencyGrid: bandwidth_hz must be nonnegative");
        if (!(bandwidth_hz / carrier_hz < 2.0))
            throw std::invalid_argument(
                "FrequencyGrid: fractional bandwidth B/f_c must be < 2, got " +
                std::to_string(bandwidth_hz / carrier_hz));
        if (n_subcarriers == 0)
            throw std::invalid_argument("FrequencyGrid: n_subcarriers must be >= 1");
        if (bandwidth_hz == 0.0 && n_subcarriers > 1)
            throw std::invalid_argument(
                "FrequencyGrid: bandwidth_hz must be positive when n_subcarriers > 1");

        frequencies_hz_.resize(n_subcarriers);
        const double lo = carrier_hz - bandwidth_hz / 2.0;
        const double step = bandwidth_hz / static_cast<double>(n_subcarriers);
        for (std::size_t i = 0; i < n_subcarriers; ++i)
            frequencies_hz_[i] = lo + (static_cast<double>(i) + 0.5) * step;
    }

    double carrier_hz() const { return carrier_hz_; }
    double bandwidth_hz() const { return bandwidth_hz_; }
    double fractional_bandwidth() const { return bandwidth_hz_ / carrier_hz_; }
    std::size_t size() const { return frequencies_hz_.size(); }
    const std::vector<double>& frequencies_hz() const { return frequencies_hz_; }

  private:
    double carrier_hz_;
    double bandwidth_hz_;
    std::vector<double> frequencies_hz_;
};

/// One uplink user: line-of-sight angle of arrival plus one complex link
/// gain per tile.
struct UserSpec {
    double theta_deg = 0.0;
    std::vector<cxd> tile_gains;

    UserSpec(double theta_deg_in, std::size_t n_tiles, cxd gain = cxd(1.0, 0.0))
        : theta_deg(theta_deg_in), tile_gains(n_tiles, gain)
    {
        check_theta();
    }

    UserSpec(double theta_deg_in, std::vector<cxd> gains)
        : theta_deg(theta_deg_in), tile_gains(std::move(gains))
    {
        check_theta();
        if (tile_gains.empty())
            throw std::invalid_argument("UserSpec: tile_gains must not be empty");
    }

  private:
    void check_theta() const
    {
        if (!(std::abs(theta_deg) < 90.0))
            throw std::domain_error("UserSpec: |theta_deg| must be < 90, got " +
                                    std::to_string(theta_deg));
    }
};

/// Per-element phase progression of a plane wave arriving from theta at
/// frequency f, for half-wavelength spacing at the carrier:
/// (f / f_c) * pi * sin(theta).  The linear dependence on f is what makes
/// a fixed beam squint across a wide band.
inline double spatial_frequency(double theta_deg, double freq_hz, double carrier_hz)
{
    if (!(std::abs(theta_deg) < 90.0))
        throw std::domain_error("spatial_frequency: |theta_deg| must be < 90, got " +
                                std::to_string(theta_deg));
    if (!(freq_hz > 0.0) || !(carrier_hz > 0.0))
        throw std::domain_error("spatial_frequency: freq_hz and carrier_hz must be positive");
    return (freq_hz / carrier_hz) * kPi * std::sin(deg_to_rad(theta_deg));
}

/// [1, e^{j omega}, ..., e^{j (n-1) omega}]; unit-modulus entries, squared
/// norm exactly n_elems.
inline std::vector<cxd> steering_vector(std::size_t n_elems, double omega)
{
    if (n_elems == 0)
        throw std::invalid_argument("steering_vector: n_elems must be >= 1");
    std::vector<cxd> a(n_elems);
    for (std::size_t i = 0; i < n_elems; ++i)
        a[i] = std::polar(1.0, static_cast<double>(i) * omega);
    return a;
}

/// Channel from one user to one tile at frequency f: the tile's local
/// steering vector scaled by the link gain and by the scalar inter-tile
/// phase e^{j * tile_index * n_per_tile * omega}.  tile_index is 0-based.
inline std::vector<cxd> tile_channel(const ArrayLayout& layout, const UserSpec& user,
                                     std::size_t tile_index, double freq_hz,
                                     double carrier_hz)
{
    if (tile_index >= layout.n_tiles())
        throw std::out_of_range("tile_channel: tile_index " + std::to_string(tile_index) +
                                " out of range for " + std::to_string(layout.n_tiles()) +
                                " tiles");
    if (user.tile_gains.size() != layout.n_tiles())
        throw std::invalid_argument("tile_channel: user has " +
                                    std::to_string(user.tile_gains.size()) +
                                    " tile gains, layout has " +
                                    std::to_string(layout.n_tiles()) + " tiles");

    const double omega = spatial_frequency(user.theta_deg, freq_hz, carrier_hz);
    const double tile_phase =
        static_cast<double>(tile_index) * static_cast<double>(layout.n_per_tile()) * omega;
    const cxd scale = user.tile_gains[tile_index] * std::polar(1.0, tile_phase);

    std::vector<cxd> h = steering_vector(layout.n_per_tile(), omega);
    for (cxd& v : h)
        v *= scale;
    return h;
}

/// All per-tile channel vectors on a frequency grid, indexed by
/// (subcarrier, tile, user).  Stored flat; every entry is a length
/// n_per_tile complex vector.
class ChannelTensor {
  public:
    ChannelTensor(ArrayLayout layout, FrequencyGrid grid, std::size_t n_users,
                  std::vector<cxd> data)
        : layout_(layout), grid_(std::move(grid)), n_users_(n_users), data_(std::move(data))
    {
        if (n_users_ == 0)
            throw std::invalid_argument("ChannelTensor: n_users must be >= 1");
        const std::size_t expect =
            grid_.size() * layout_.n_tiles() * n_users_ * layout_.n_per_tile();
        if (data_.size() != expect)
            throw std::invalid_argument("ChannelTensor: data size mismatch");
    }

    std::span<const cxd> at(std::size_t subcarrier, std::size_t tile, std::size_t user) const
    {
        if (subcarrier >= grid_.size() || tile >= layout_.n_tiles() || user >= n_users_)
            throw std::out_of_range("ChannelTensor::at: index out of range");
        const std::size_t na = layout_.n_per_tile();
        const std::size_t off =
            ((subcarrier * layout_.n_tiles() + tile) * n_users_ + user) * na;
        return {data_.data() + off, na};
    }

    const ArrayLayout& layout() const { return layout_; }
    const FrequencyGrid& grid() const { return grid_; }
    std::size_t n_subcarriers() const { return grid_.size(); }
    std::size_t n_tiles() const { return layout_.n_tiles(); }
    std::size_t n_per_tile() const { return layout_.n_per_tile(); }
    std::size_t n_users() const { return n_users_; }

  private:
    ArrayLayout layout_;
    FrequencyGrid grid_;
    std::size_t n_users_;
    std::vector<cxd> data_;
};

/// Evaluate every (subcarrier, tile, user) channel vector on the grid.
inline ChannelTensor build_channel_tensor(const ArrayLayout& layout,
                                          const std::vector<UserSpec>& users,
                                          const FrequencyGrid& grid)
{
    if (users.empty())
        throw std::invalid_argument("build_channel_tensor: users must not be empty");

    const std::size_t na = layout.n_per_tile();
    std::vector<cxd> data;
    data.reserve(grid.size() * layout.n_tiles() * users.size() * na);
    for (double f : grid.frequencies_hz())
        for (std::size_t m = 0; m < layout.n_tiles(); ++m)
            for (std::size_t k = 0; k < users.size(); ++k) {
                const std::vector<cxd> h =
                    tile_channel(layout, users[k], m, f, grid.carrier_hz());
                data.insert(data.end(), h.begin(), h.end());
            }
    return ChannelTensor(layout, grid, users.size(), std::move(data));
}

} // namespace tilebf

#endif // TILEBF_MODEL_HPP
