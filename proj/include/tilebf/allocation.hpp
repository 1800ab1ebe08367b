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

#ifndef TILEBF_ALLOCATION_HPP
#define TILEBF_ALLOCATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tilebf/beams.hpp"
#include "tilebf/model.hpp"

namespace tilebf {

enum class AllocationMode { disjoint, full_sharing, clustered };

/// A user-to-tile mapping plus the RF weights it implies.  tile_groups is a
/// partition of the 0-based tile indices; group_users lists the users each
/// group serves.
struct AllocationPlan {
    AllocationMode mode = AllocationMode::disjoint;
    std::size_t cluster_size = 0; // clustered mode only
    std::vector<std::vector<std::size_t>> tile_groups;
    std::vector<std::vector<std::size_t>> group_users;
    RfWeightPlan plan;
};

namespace detail {

inline void check_users(const ArrayLayout& layout, const std::vector<UserSpec>& users,
                        const char* who)
{
    if (users.empty())
        throw std::invalid_argument(std::string(who) + ": users must not be empty");
    for (std::size_t k = 0; k < users.size(); ++k)
        if (users[k].tile_gains.size() != layout.n_tiles())
            throw std::invalid_argument(std::string(who) + ": user " + std::to_string(k) +
                                        " gain count does not match tile count");
}

} // namespace detail

/// Split the tiles into equal contiguous blocks, one per user, each block
/// carrying that user's full-interval broad beam.
inline AllocationPlan disjoint_allocation(const ArrayLayout& layout,
                                          const std::vector<UserSpec>& users, double beta)
{
    detail::check_users(layout, users, "disjoint_allocation");
    const std::size_t n_users = users.size();
    const std::size_t nd = layout.n_tiles();
    if (nd % n_users != 0)
        throw std::invalid_argument("disjoint_allocation: user count " +
                                    std::to_string(n_users) + " must divide tile count " +
                                    std::to_string(nd));
    const std::size_t block = nd / n_users;

    AllocationPlan alloc;
    alloc.mode = AllocationMode::disjoint;
    alloc.plan.phase_only = true;
    alloc.plan.tile_weights.resize(nd);
    for (std::size_t k = 0; k < n_users; ++k) {
        const std::vector<cxd> w = quadratic_broadbeam_weights(
            layout.n_per_tile(), squint_interval(users[k].theta_deg, beta));
        std::vector<std::size_t> tiles(block);
        for (std::size_t i = 0; i < block; ++i) {
            tiles[i] = k * block + i;
            alloc.plan.tile_weights[tiles[i]] = w;
        }
        alloc.tile_groups.push_back(std::move(tiles));
        alloc.group_users.push_back({k});
    }
    return alloc;
}

/// Every tile serves every user: per-tile weights are the complex sum of the
/// users' broad-beam vectors.  Superposition makes the entries vary in
/// magnitude, so the plan needs amplitude as well as phase control.
inline AllocationPlan full_sharing_plan(const ArrayLayout& layout,
                                        const std::vector<UserSpec>& users, double beta)
{
    detail::check_users(layout, users, "full_sharing_plan");
    if (users.size() < 2)
        throw std::invalid_argument("full_sharing_plan: needs at least two users");

    const std::size_t na = layout.n_per_tile();
    std::vector<cxd> shared(na, cxd(0.0, 0.0));
    for (const UserSpec& user : users) {
        const std::vector<cxd> w =
            quadratic_broadbeam_weights(na, squint_interval(user.theta_deg, beta));
        for (std::size_t i = 0; i < na; ++i)
            shared[i] += w[i];
    }
    double norm_sq = 0.0;
    for (const cxd& w : shared)
        norm_sq += std::norm(w);
    if (!(norm_sq > 1e-24))
        throw std::runtime_error("full_sharing_plan: superposed weights are numerically zero");

    AllocationPlan alloc;
    alloc.mode = AllocationMode::full_sharing;
    alloc.plan.phase_only = false;
    alloc.plan.tile_weights.assign(layout.n_tiles(), shared);
    std::vector<std::size_t> all_tiles(layout.n_tiles());
    for (std::size_t m = 0; m < layout.n_tiles(); ++m)
        all_tiles[m] = m;
    std::vector<std::size_t> all_users(users.size());
    for (std::size_t k = 0; k < users.size(); ++k)
        all_users[k] = k;
    alloc.tile_groups.push_back(std::move(all_tiles));
    alloc.group_users.push_back(std::move(all_users));
    return alloc;
}

/// Group angle-sorted users into consecutive clusters of cluster_size, give
/// each cluster as many consecutive tiles as it has users, and point one
/// broad beam per cluster at the smallest interval covering the union of the
/// members' squint intervals.
inline AllocationPlan cluster_allocation(const ArrayLayout& layout,
                                         const std::vector<UserSpec>& users,
                                         std::size_t cluster_size, double beta)
{
    detail::check_users(layout, users, "cluster_allocation");
    const std::size_t n_users = users.size();
    if (cluster_size == 0 || n_users % cluster_size != 0)
        throw std::invalid_argument("cluster_allocation: cluster_size " +
                                    std::to_string(cluster_size) + " must divide user count " +
                                    std::to_string(n_users));
    if (n_users != layout.n_tiles())
        throw std::invalid_argument("cluster_allocation: needs one tile per user (" +
                                    std::to_string(n_users) + " users, " +
                                    std::to_string(layout.n_tiles()) + " tiles)");
    for (std::size_t k = 1; k < n_users; ++k)
        if (users[k].theta_deg < users[k - 1].theta_deg)
            throw std::invalid_argument("cluster_allocation: users must be sorted by angle");

    AllocationPlan alloc;
    alloc.mode = AllocationMode::clustered;
    alloc.cluster_size = cluster_size;
    alloc.plan.phase_only = true;
    alloc.plan.tile_weights.resize(layout.n_tiles());

    const std::size_t n_clusters = n_users / cluster_size;
    for (std::size_t c = 0; c < n_clusters; ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        std::vector<std::size_t> members(cluster_size);
        for (std::size_t i = 0; i < cluster_size; ++i) {
            const std::size_t k = c * cluster_size + i;
            members[i] = k;
            const SpatialInterval iv = squint_interval(users[k].theta_deg, beta);
            lo = std::min(lo, iv.lower());
            hi = std::max(hi, iv.upper());
        }
        const SpatialInterval hull((lo + hi) / 2.0, hi - lo);
        const std::vector<cxd> w = quadratic_broadbeam_weights(layout.n_per_tile(), hull);

        std::vector<std::size_t> tiles(cluster_size);
        for (std::size_t i = 0; i < cluster_size; ++i) {
            tiles[i] = c * cluster_size + i;
            alloc.plan.tile_weights[tiles[i]] = w;
        }
        alloc.tile_groups.push_back(std::move(tiles));
        alloc.group_users.push_back(std::move(members));
    }
    return alloc;
}

} // namespace tilebf

#endif // TILEBF_ALLOCATION_HPP
