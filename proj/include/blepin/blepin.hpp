// Copyright 2026 the blepin authors.
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

#pragma once

// Umbrella header for the blepin library: a deterministic simulator for a
// BLE PIN-authentication link, consisting of a log-normal shadowing
// channel model, a byte-level frame codec, keypad and verifier state
// machines, a discrete-event session engine, and CSV import/export.

#include "blepin/channel.hpp"   // IWYU pragma: export
#include "blepin/csv.hpp"       // IWYU pragma: export
#include "blepin/display.hpp"   // IWYU pragma: export
#include "blepin/errors.hpp"    // IWYU pragma: export
#include "blepin/frame.hpp"     // IWYU pragma: export
#include "blepin/nodes.hpp"     // IWYU pragma: export
#include "blepin/random.hpp"    // IWYU pragma: export
#include "blepin/simulator.hpp" // IWYU pragma: export
