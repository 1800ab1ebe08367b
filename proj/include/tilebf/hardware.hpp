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

#ifndef TILEBF_HARDWARE_HPP
#define TILEBF_HARDWARE_HPP

#include <cstddef>
#include <stdexcept>

#include "tilebf/model.hpp"

namespace tilebf {

/// Front-end power budget before DSP: LNA + phase shifter per element, one
/// downconversion chain (mixer + I/Q ADC pair) per tile.  Defaults are rough
/// 140 GHz estimates; both knobs are configurable for sensitivity sweeps.
struct PowerModel {
    double per_element_mw = 20.0;
    double per_tile_mw = 400.0;

    void validate() const
    {
        if (!(per_element_mw > 0.0) || !(per_tile_mw > 0.0))
            throw std::invalid_argument("PowerModel: power constants must be positive");
    }
};

/// Intra-tile RF routing loss.  At 140 GHz the wavelength is ~2.142 mm, so
/// with half-wavelength element spacing and a center-placed RFIC the longest
/// trace grows as n_per_tile / 2 millimeters.
struct LossModel {
    double loss_db_per_mm = 0.2;
    double wavelength_mm = 2.142;

    void validate() const
    {
        if (!(loss_db_per_mm > 0.0) || !(wavelength_mm > 0.0))
            throw std::invalid_argument("LossModel: parameters must be positive");
    }
};

/// Total front-end power in watts: (per_element * N + per_tile * N_d) / 1000.
inline double total_power_w(const PowerModel& model, const ArrayLayout& layout)
{
    model.validate();
    return (model.per_element_mw * static_cast<double>(layout.n_total()) +
            model.per_tile_mw * static_cast<double>(layout.n_tiles())) /
           1000.0;
}

/// Power share attributed to a single element, in mW.
inline double per_element_power_mw(const PowerModel& model, const ArrayLayout& layout)
{
    model.validate();
    return model.per_element_mw +
           model.per_tile_mw * static_cast<double>(layout.n_tiles()) /
               static_cast<double>(layout.n_total());
}

/// Worst-case insertion loss of the RF traces inside one tile, in dB.
inline double tile_trace_loss_db(const LossModel& model, std::size_t n_per_tile)
{
    model.validate();
    if (n_per_tile == 0)
        throw std::invalid_argument("tile_trace_loss_db: n_per_tile must be >= 1");
    return model.loss_db_per_mm * static_cast<double>(n_per_tile) / 2.0;
}

} // namespace tilebf

#endif // TILEBF_HARDWARE_HPP
