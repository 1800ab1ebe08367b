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

#ifndef TILEBF_TILEBF_HPP
#define TILEBF_TILEBF_HPP

#include "tilebf/allocation.hpp"
#include "tilebf/beams.hpp"
#include "tilebf/hardware.hpp"
#include "tilebf/io.hpp"
#include "tilebf/model.hpp"
#include "tilebf/receiver.hpp"
#include "tilebf/scenario.hpp"

#endif // TILEBF_TILEBF_HPP
