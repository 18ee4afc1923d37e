// Copyright 2026 The swapanneal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWAPANNEAL_SWAPANNEAL_HPP
#define SWAPANNEAL_SWAPANNEAL_HPP

// Core library: spectra, states, protocol, flow, schedules and networks.
// experiments.hpp and verify.hpp are included separately.

#include "swapanneal/coefficients.hpp"
#include "swapanneal/flow.hpp"
#include "swapanneal/format.hpp"
#include "swapanneal/network.hpp"
#include "swapanneal/protocol.hpp"
#include "swapanneal/schedule.hpp"
#include "swapanneal/spectrum.hpp"
#include "swapanneal/state.hpp"

#endif  // SWAPANNEAL_SWAPANNEAL_HPP
